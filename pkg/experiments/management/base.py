"""Shared plumbing for the experiment commands: flags mirror RunConfig fields."""

import logging
from dataclasses import fields
from typing import Any, Dict, List, Optional

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from experiments.config import ConfigError, RunConfig

logger = logging.getLogger(__name__)

FLAG_NAMES = {"lam": "lambda"}


def _flag_kwargs(annotation) -> Dict[str, Any]:
    if annotation == bool:
        return {"action": "store_const", "const": True}
    if annotation == List[int]:
        return {"nargs": "+", "type": int}
    if annotation == Optional[List[float]]:
        return {"nargs": "+", "type": float}
    if annotation in (float, Optional[float]):
        return {"type": float}
    if annotation == int:
        return {"type": int}
    return {"type": str}


class ExperimentCommand(BaseCommand):
    def add_arguments(self, parser):
        parser.add_argument("--config", help="Flat JSON document of RunConfig keys; flags override it.")
        for f in fields(RunConfig):
            flag = "--" + FLAG_NAMES.get(f.name, f.name).replace("_", "-")
            parser.add_argument(flag, dest=f.name, default=None, **_flag_kwargs(f.type))

    def load_config(self, options) -> RunConfig:
        overrides = {
            f.name: options[f.name] for f in fields(RunConfig) if options.get(f.name) is not None
        }
        if options.get("config"):
            return RunConfig.from_file(options["config"], overrides)
        return RunConfig.from_dict(overrides)

    @property
    def workers(self) -> int:
        return settings.BOUNDARY_WORKERS

    def handle(self, *args, **options):
        try:
            config = self.load_config(options)
            self.run_experiment(config, progress=options["verbosity"] > 1)
        except ConfigError as exc:
            logger.debug("rejected configuration: %s", exc)
            raise CommandError(str(exc)) from exc

    def run_experiment(self, config: RunConfig, progress: bool) -> None:
        raise NotImplementedError
