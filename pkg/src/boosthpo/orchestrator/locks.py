"""File-system lock protocol assigning unique per-host slot ids.

Anonymous workers each drop a lock file named by their tag into
``<lock_dir>/<epoch>/<host>/``, wait until every worker of the epoch has
done the same, then sort their host's filenames lexicographically and take
the index of their own file as the slot id.  The coordinator clears stale
lock files before an epoch starts.
"""

from __future__ import annotations

import os
import socket
import time
from dataclasses import dataclass
from pathlib import Path

from ..errors import RendezvousTimeout, StaleEpoch, TooManyWorkers

__all__ = ["SlotAssignment", "detect_host_id", "start_epoch", "acquire_slot"]

HOST_ENV_VAR = "BOOSTHPO_HOST_ID"
LOCK_SUFFIX = ".lock"


@dataclass(frozen=True)
class SlotAssignment:
    host_id: str
    slot_id: int
    lock_path: str


def detect_host_id() -> str:
    """Host identity from the environment; workers never learn it from
    partition metadata."""
    return os.environ.get(HOST_ENV_VAR) or socket.gethostname()


def _lock_files(root: Path) -> list[Path]:
    if not root.exists():
        return []
    return sorted(p for p in root.rglob(f"*{LOCK_SUFFIX}") if p.is_file())


def start_epoch(lock_dir, epoch: str) -> Path:
    """Coordinator step: clear previous lock files, create the epoch dir.

    Aborts with StaleEpoch when a lock file is newer than the epoch start,
    which means another epoch is still writing into this directory.
    """
    root = Path(lock_dir)
    root.mkdir(parents=True, exist_ok=True)
    epoch_start = time.time()
    for path in _lock_files(root):
        if path.stat().st_mtime > epoch_start:
            raise StaleEpoch(
                f"{path} is newer than the epoch start; another epoch appears live"
            )
        path.unlink(missing_ok=True)
    epoch_dir = root / epoch
    epoch_dir.mkdir(parents=True, exist_ok=True)
    return epoch_dir


def acquire_slot(
    lock_dir,
    host_id: str,
    slots_per_host: int,
    worker_tag: str,
    *,
    epoch: str,
    total_workers: int,
    timeout: float = 30.0,
    poll_interval: float = 0.005,
) -> SlotAssignment:
    """Worker step: write the lock file, rendezvous, take the sorted index.

    Raises TooManyWorkers when the host ends up with more joiners than
    slots, and RendezvousTimeout when the epoch never fills up.
    """
    root = Path(lock_dir)
    host_dir = root / epoch / host_id
    host_dir.mkdir(parents=True, exist_ok=True)
    own = host_dir / f"{worker_tag}{LOCK_SUFFIX}"
    own.write_text(f"{worker_tag}\n{epoch}\n")

    if len(_lock_files(host_dir)) > slots_per_host:
        own.unlink(missing_ok=True)
        raise TooManyWorkers(
            f"host {host_id} has more than {slots_per_host} joiners in epoch {epoch}"
        )

    deadline = time.monotonic() + timeout
    while len(_lock_files(root / epoch)) < total_workers:
        if time.monotonic() > deadline:
            own.unlink(missing_ok=True)
            raise RendezvousTimeout(
                f"epoch {epoch} never reached {total_workers} lock files"
            )
        time.sleep(poll_interval)

    names = sorted(p.name for p in _lock_files(host_dir))
    if len(names) > slots_per_host:
        own.unlink(missing_ok=True)
        raise TooManyWorkers(
            f"host {host_id} has {len(names)} joiners for {slots_per_host} slots"
        )
    slot = names.index(own.name)
    return SlotAssignment(host_id=host_id, slot_id=slot, lock_path=str(own))
