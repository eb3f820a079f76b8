from django.apps import AppConfig


class LinesearchConfig(AppConfig):
    name = 'linesearch'
