from django.apps import AppConfig


class StripsConfig(AppConfig):
    name = 'strips'
    verbose_name = 'Strip detection and verification'
