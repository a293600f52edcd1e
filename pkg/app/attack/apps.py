from django.apps import AppConfig


class AttackConfig(AppConfig):
    name = 'attack'
    verbose_name = 'Colour-strip attack simulation'
