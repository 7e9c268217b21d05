"""Grid enumeration, the file-lock slot protocol, and the worker pool."""

from .grid import GRID_PROFILES, Grid, assignment_to_hyperparams, enumerate_grid
from .locks import HOST_ENV_VAR, SlotAssignment, acquire_slot, detect_host_id, start_epoch
from .runner import collect_results, default_trial_runner, derive_trial_seed, run_grid

__all__ = [
    "GRID_PROFILES",
    "Grid",
    "assignment_to_hyperparams",
    "enumerate_grid",
    "HOST_ENV_VAR",
    "SlotAssignment",
    "acquire_slot",
    "detect_host_id",
    "start_epoch",
    "collect_results",
    "default_trial_runner",
    "derive_trial_seed",
    "run_grid",
]
