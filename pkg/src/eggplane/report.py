"""Verification certificates and reproducible randomness.

Every ``verify_*`` routine in this package returns a :class:`Certificate`
recording what was checked, how hard, and what (if anything) failed.
Certificates serialize to single-line JSON so that a verification campaign
is a replayable, diffable log.  Wall-clock time is recorded but excluded
from :meth:`Certificate.canonical_json`, which is the form used when two
runs are compared for byte identity.

Randomness policy: a run has one master seed.  Every sampling stage derives
its own generator with :func:`substream`, keyed by a human-readable label,
so adding a new stage never perturbs the draws of existing ones and
sharded runs are reproducible independent of worker count.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import time
from typing import Any, Iterator

import numpy as np

TOOL_VERSION = "0.1.0"


def canonical_json(obj: Any) -> str:
    """Deterministic JSON encoding: sorted keys, no whitespace tricks."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def config_hash(obj: Any) -> str:
    """sha256 of the canonical JSON encoding of a config-like object."""
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def substream(seed: int, *labels: str) -> np.random.Generator:
    """Child generator for one named sampling stage of a seeded run.

    The same (seed, labels) always yields the same stream; distinct labels
    yield independent streams.  Labels are hashed to ints so callers can
    use readable names like ``substream(seed, "egg", "triples", "shard3")``.
    """
    keys = [int.from_bytes(hashlib.sha256(s.encode()).digest()[:4], "big") for s in labels]
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=keys))


def shard_ranges(total: int, shards: int) -> list[tuple[int, int]]:
    """Split range(total) into `shards` near-equal contiguous pieces.

    The split depends only on (total, shards), never on how many workers
    actually execute the pieces, so sharded certificates merge identically
    whatever --threads was.
    """
    shards = max(1, min(shards, total)) if total else 1
    edges = np.linspace(0, total, shards + 1).astype(int)
    return [(int(edges[i]), int(edges[i + 1])) for i in range(shards)]


@dataclasses.dataclass
class Certificate:
    """Outcome of one verification routine.

    ok          -- overall verdict
    object      -- what was verified, e.g. "egg(pw)" or "spread(pw)"
    mode        -- "exhaustive", "symmetry_reduced" or "sampled"
    checks_run  -- how many atomic checks were actually executed
    failures    -- list of witness dicts, empty iff ok (capped by caller)
    details     -- free-form summary statistics (counts, histograms, ...)
    seed        -- master seed if the mode sampled anything, else None
    shards      -- how many shards the work was split into
    config_hash -- hash of the exact object configuration verified
    wall_ms     -- elapsed time; informational only
    """

    object: str
    mode: str
    ok: bool
    checks_run: int
    failures: list = dataclasses.field(default_factory=list)
    details: dict = dataclasses.field(default_factory=dict)
    seed: int | None = None
    shards: int = 1
    config_hash: str = ""
    wall_ms: float = 0.0
    version: str = TOOL_VERSION

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["object"] = self.object
        return d

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def canonical_dict(self) -> dict:
        """Dict with volatile fields removed -- byte-stable across reruns."""
        d = self.to_dict()
        d.pop("wall_ms", None)
        return d

    def canonical_json(self) -> str:
        return canonical_json(self.canonical_dict())

    @staticmethod
    def from_json(line: str) -> "Certificate":
        d = json.loads(line)
        d.setdefault("wall_ms", 0.0)
        return Certificate(**d)


class stopwatch:
    """Context manager; `.ms` afterwards holds elapsed milliseconds."""

    def __enter__(self) -> "stopwatch":
        self._t0 = time.perf_counter()
        self.ms = 0.0
        return self

    def __exit__(self, *exc) -> None:
        self.ms = (time.perf_counter() - self._t0) * 1000.0


def merge_failures(failures: list, witness: Any, cap: int = 20) -> None:
    """Append a failure witness, keeping at most `cap` of them."""
    if len(failures) < cap:
        failures.append(witness)


def iter_jsonl(path: str) -> Iterator[Certificate]:
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield Certificate.from_json(line)
