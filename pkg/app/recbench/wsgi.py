"""
WSGI config for the recbench results API.

Serves the read-only results browser; the benchmark itself runs through
``manage.py`` commands.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'recbench.settings')

application = get_wsgi_application()
