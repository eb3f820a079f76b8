from django.apps import AppConfig


class ProblemConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "problem"
    verbose_name = "Synthetic boundary-fragment problems"
