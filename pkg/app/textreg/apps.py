from django.apps import AppConfig


class TextRegConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'textreg'
    verbose_name = 'Text-as-regularizer models'
