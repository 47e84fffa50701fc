from django.apps import AppConfig


class TextFeatConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'textfeat'
    verbose_name = 'Text-as-feature models'
