import os
import threading
import time

import pytest

from boosthpo.errors import RendezvousTimeout, StaleEpoch, TooManyWorkers
from boosthpo.orchestrator import acquire_slot, detect_host_id, start_epoch
from boosthpo.orchestrator.locks import HOST_ENV_VAR


def acquire_in_threads(lock_dir, epoch, jobs, timeout=10.0):
    """jobs: list of (host, tag).  Returns ({tag: assignment}, {tag: error})."""
    results, errors = {}, {}

    def run(host, tag):
        try:
            results[tag] = acquire_slot(
                lock_dir,
                host,
                slots_per_host=2,
                worker_tag=tag,
                epoch=epoch,
                total_workers=len(jobs),
                timeout=timeout,
            )
        except Exception as exc:  # noqa: BLE001 - collected for assertions
            errors[tag] = exc

    threads = [threading.Thread(target=run, args=job) for job in jobs]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    return results, errors


class TestAcquireSlot:
    def test_two_workers_one_host(self, tmp_path):
        start_epoch(tmp_path, "e1")
        results, errors = acquire_in_threads(
            tmp_path, "e1", [("hostA", "w0"), ("hostA", "w1")]
        )
        assert not errors
        assert sorted(a.slot_id for a in results.values()) == [0, 1]

    def test_single_worker_gets_slot_zero(self, tmp_path):
        start_epoch(tmp_path, "e1")
        a = acquire_slot(
            tmp_path, "hostA", 2, "only", epoch="e1", total_workers=1, timeout=5
        )
        assert a.slot_id == 0
        assert a.host_id == "hostA"
        assert os.path.exists(a.lock_path)

    def test_eight_workers_four_hosts(self, tmp_path):
        start_epoch(tmp_path, "e1")
        jobs = [(f"host{i // 2}", f"w{i}") for i in range(8)]
        results, errors = acquire_in_threads(tmp_path, "e1", jobs)
        assert not errors
        pairs = {(a.host_id, a.slot_id) for a in results.values()}
        assert len(pairs) == 8
        for host in {f"host{i}" for i in range(4)}:
            host_dir = tmp_path / "e1" / host
            assert len(list(host_dir.glob("*.lock"))) == 2

    def test_third_worker_on_full_host_rejected(self, tmp_path):
        start_epoch(tmp_path, "e1")
        results, errors = acquire_in_threads(
            tmp_path, "e1", [("hostA", "w0"), ("hostA", "w1")]
        )
        assert not errors
        with pytest.raises(TooManyWorkers):
            acquire_slot(
                tmp_path, "hostA", 2, "w2", epoch="e1", total_workers=3, timeout=5
            )

    def test_lock_file_content(self, tmp_path):
        start_epoch(tmp_path, "e9")
        a = acquire_slot(
            tmp_path, "hostZ", 2, "tag7", epoch="e9", total_workers=1, timeout=5
        )
        with open(a.lock_path) as fh:
            assert fh.read() == "tag7\ne9\n"

    def test_rendezvous_timeout(self, tmp_path):
        start_epoch(tmp_path, "e1")
        with pytest.raises(RendezvousTimeout):
            acquire_slot(
                tmp_path, "hostA", 2, "lonely", epoch="e1", total_workers=2, timeout=0.3
            )


class TestStartEpoch:
    def test_clears_previous_epoch_files(self, tmp_path):
        old = tmp_path / "old" / "hostA"
        old.mkdir(parents=True)
        stale = old / "w0.lock"
        stale.write_text("w0\nold\n")
        past = time.time() - 60
        os.utime(stale, (past, past))
        start_epoch(tmp_path, "new")
        assert not stale.exists()
        assert (tmp_path / "new").is_dir()

    def test_stale_epoch_on_fresh_foreign_files(self, tmp_path):
        live = tmp_path / "other" / "hostA"
        live.mkdir(parents=True)
        lock = live / "w9.lock"
        lock.write_text("w9\nother\n")
        future = time.time() + 60
        os.utime(lock, (future, future))
        with pytest.raises(StaleEpoch):
            start_epoch(tmp_path, "new")


class TestDetectHost:
    def test_env_override_wins(self, monkeypatch):
        monkeypatch.setenv(HOST_ENV_VAR, "rack42")
        assert detect_host_id() == "rack42"

    def test_falls_back_to_hostname(self, monkeypatch):
        monkeypatch.delenv(HOST_ENV_VAR, raising=False)
        import socket

        assert detect_host_id() == socket.gethostname()
