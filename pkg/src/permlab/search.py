"""Seeded randomized searches for violations of permanent inequalities.

Iteration i draws its instance from ``default_rng([seed, i])``, so a run is
a pure function of (config, iteration range): the state file only needs
the next iteration index to resume, and splitting the range across
workers cannot change the result.

Instances are screened in complex128.  Anything whose float ratio
lhs / rhs exceeds the configured `flag_ratio` (1 + `FLAG_SLACK` by
default) is rebuilt exactly from its
dyadic sampling parameters and re-checked in exact arithmetic; only
exactly confirmed violations are reported as such, the rest stay in the
candidate list marked "cleared".
"""

from __future__ import annotations

import heapq
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .conjectures import (
    bapat_sunder,
    bapat_sunder_per_max,
    chollet,
    chollet_self,
    drury_inequalities,
    pot_check,
    real_chollet,
)
from .errors import PermlabError, SearchStateError
from .matrix_io import format_matrix, load_matrix
from .matrix import hadamard
from .numeric import format_scalar
from .permanent import per_complex, permanent
from .reports import compare, inputs_of
from .sampling import (
    choose_rank,
    correlation_from_parameters,
    psd_factor,
    psd_from_factor,
    rng_for,
    sphere_parameters,
)
from .schur import pi_array

STATE_FORMAT = "permlab-search-state"
STATE_VERSION = 1
FLAG_SLACK = 1e-9
BLOCK = 256


# ---------------------------------------------------------------------------
# float screens: each returns (lhs, rhs) as floats
# ---------------------------------------------------------------------------


def _per(M):
    return per_complex(M)[0].real


def _screen_pot(A):
    if A.shape[0] > 5:
        from .matrix import Matrix
        from .schur import SchurPower, extreme_eigenvalues

        lmax = float(extreme_eigenvalues(SchurPower(Matrix.from_numpy(A)))[0])
    else:
        lmax = float(np.linalg.eigvalsh(pi_array(A))[-1])
    return lmax, _per(A)


def _screen_bapat_sunder(A, B):
    return _per(A * B), _per(A) * float(np.prod(np.diagonal(B).real))


def _screen_chollet(A, B):
    return _per(A * B), _per(A) * _per(B)


def _screen_chollet_self(A):
    return _per(A * A.conj()), _per(A) ** 2


def _screen_real_chollet(A):
    return _per(A * A).real, _per(A) ** 2


def _minor_array(A):
    n = A.shape[0]
    M = np.empty_like(A)
    for i in range(n):
        for j in range(n):
            keep_r = [k for k in range(n) if k != i]
            keep_c = [k for k in range(n) if k != j]
            M[i, j] = A[i, j] * per_complex(A[np.ix_(keep_r, keep_c)])[0]
    return M


def _screen_per_max(A):
    return float(np.linalg.eigvalsh(_minor_array(A))[-1]), _per(A)


def _drury_terms(A):
    n = A.shape[0]
    first = (A[0, 0] * per_complex(A[1:, 1:])[0]).real
    s = 0.0
    for k in range(1, n):
        keep = [i for i in range(1, n) if i != k]
        s += abs(A[0, k]) ** 2 * per_complex(A[np.ix_(keep, keep)])[0].real
    return first, s, _per(A)


def _screen_drury(A):
    first, s, p = _drury_terms(A)
    return first**2 + s**2, p**2


def _screen_drury_linear(A):
    _, s, p = _drury_terms(A)
    return s, p


def _screen_compression(A, X):
    return _per(A * X), _per(A)


def _exact_pot(A):
    return pot_check(A, exact_max_n=5)


def _exact_compression(A, X):
    return compare("hadamard_compression", permanent(hadamard(A, X)), permanent(A), inputs_of(A, X))


def _exact_drury(A):
    return drury_inequalities(A)[0]


def _exact_drury_linear(A):
    return drury_inequalities(A)[1]


@dataclass(frozen=True)
class Target:
    name: str
    kind: str  # psd, psd2, corr2
    screen: object
    exact: object
    real: bool = False
    min_n: int = 1


TARGETS = {
    "pot": Target("pot", "psd", _screen_pot, _exact_pot),
    "bapat_sunder": Target("bapat_sunder", "corr2", _screen_bapat_sunder, bapat_sunder),
    "chollet": Target("chollet", "psd2", _screen_chollet, chollet),
    "chollet_self": Target("chollet_self", "psd", _screen_chollet_self, chollet_self),
    "real_chollet": Target("real_chollet", "psd", _screen_real_chollet, real_chollet, real=True),
    "per_max": Target("per_max", "psd", _screen_per_max, bapat_sunder_per_max, min_n=2),
    "drury": Target("drury", "psd", _screen_drury, _exact_drury, min_n=3),
    "drury_linear": Target("drury_linear", "psd", _screen_drury_linear, _exact_drury_linear, min_n=3),
    "compression": Target("compression", "corr2", _screen_compression, _exact_compression),
}


# ---------------------------------------------------------------------------
# configuration and state
# ---------------------------------------------------------------------------


@dataclass
class SearchConfig:
    target: str
    n: int
    rank: int | None = None
    field: str = "gaussian"
    seed: int = 0
    top_k: int = 32
    bits: int = 6
    enforce_deficient: bool = False
    pinned: str | None = None
    flag_ratio: float = 1 + FLAG_SLACK

    def validate(self):
        if self.target not in TARGETS:
            raise PermlabError(f"unknown target {self.target!r}; choose from {sorted(TARGETS)}")
        t = TARGETS[self.target]
        if self.pinned is None:
            if not 1 <= self.n <= 7:
                raise PermlabError("search dimension must lie in 1..7")
            if self.n < t.min_n:
                raise PermlabError(f"target {self.target} needs n >= {t.min_n}")
            if self.rank is not None and not 1 <= self.rank <= self.n:
                raise PermlabError(f"rank {self.rank} out of range for n = {self.n}")
        if self.field not in ("gaussian", "rational"):
            raise PermlabError("search field must be gaussian or rational")
        if self.top_k < 1:
            raise PermlabError("top_k must be positive")
        if not 0 < self.flag_ratio:
            raise PermlabError("flag_ratio must be positive")
        return self

    @property
    def complex_field(self):
        return self.field == "gaussian" and not TARGETS[self.target].real


@dataclass
class SearchState:
    config: SearchConfig
    next_iteration: int = 0
    counters: dict = field(default_factory=lambda: {"evaluated": 0, "flagged": 0, "confirmed": 0, "cleared": 0})
    candidates: list = field(default_factory=list)

    @property
    def violations(self):
        return [c for c in self.candidates if c["status"] == "confirmed"]

    def to_json(self):
        return {
            "format": STATE_FORMAT,
            "version": STATE_VERSION,
            "library_version": __version__,
            "config": asdict(self.config),
            "rng": {"kind": "numpy default_rng([seed, iteration])", "next_iteration": self.next_iteration},
            "counters": dict(self.counters),
            "candidates": self.candidates,
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=1) + "\n"

    def save(self, path):
        Path(path).write_text(self.dumps())

    @classmethod
    def from_json(cls, data):
        try:
            if data.get("format") != STATE_FORMAT:
                raise SearchStateError("not a search state file")
            if data.get("version") != STATE_VERSION:
                raise SearchStateError(f"unsupported state version {data.get('version')!r}")
            cfg = SearchConfig(**data["config"]).validate()
            nxt = int(data["rng"]["next_iteration"])
            counters = {k: int(v) for k, v in data["counters"].items()}
            cands = list(data["candidates"])
            for c in cands:
                for key in ("iteration", "ratio", "status", "digest", "matrices"):
                    if key not in c:
                        raise SearchStateError(f"candidate missing {key!r}")
        except SearchStateError:
            raise
        except (KeyError, TypeError, ValueError, PermlabError) as exc:
            raise SearchStateError(f"corrupt state file: {exc}") from exc
        return cls(cfg, nxt, counters, cands)

    @classmethod
    def load(cls, path):
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SearchStateError(f"cannot read state file: {exc}") from exc
        if not isinstance(data, dict):
            raise SearchStateError("corrupt state file")
        return cls.from_json(data)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def _draw(cfg, i):
    """(float arrays, exact-lift thunk) for iteration i."""
    t = TARGETS[cfg.target]
    if cfg.pinned:
        A = load_matrix(cfg.pinned)
        mats = [A, A.conjugate()] if t.kind in ("psd2", "corr2") else [A]
        return [M.as_numpy() for M in mats], (lambda: mats)
    rng = rng_for(cfg.seed, i)
    cplx = cfg.complex_field
    count = 2 if t.kind in ("psd2", "corr2") else 1
    params = []
    for _ in range(count):
        r = choose_rank(rng, cfg.n, cfg.rank, cfg.enforce_deficient)
        if t.kind == "corr2":
            params.append(("corr", sphere_parameters(rng, cfg.n, r, cplx, cfg.bits), r))
        else:
            params.append(("psd", psd_factor(rng, cfg.n, r, cplx, cfg.bits), r))
    floats = []
    for kind, P, r in params:
        if kind == "corr":
            floats.append(correlation_from_parameters(P, r, cplx, exact=False))
        else:
            floats.append(P.conj().T @ P)

    def lift():
        out = []
        for kind, P, r in params:
            out.append(correlation_from_parameters(P, r, cplx) if kind == "corr" else psd_from_factor(P))
        return out

    return floats, lift


def _ratio(lhs, rhs):
    if rhs > 0:
        return lhs / rhs
    if lhs > 0:
        return math.inf
    return 1.0 if lhs == rhs else 0.0


def _exact_ratio(rep):
    r = rep.ratio()
    if r is None:
        return None
    try:
        return format_scalar(r)
    except TypeError:
        return repr(float(r))


def _run_range(cfg, start, stop):
    """Local top-k and counters for iterations [start, stop)."""
    t = TARGETS[cfg.target]
    counters = {"evaluated": 0, "flagged": 0, "confirmed": 0, "cleared": 0}
    heap = []  # (ratio, -iteration, payload) min-heap of the best k
    exact_cache = {}
    for i in range(start, stop):
        floats, lift = _draw(cfg, i)
        lhs, rhs = t.screen(*floats)
        ratio = _ratio(float(lhs), float(rhs))
        counters["evaluated"] += 1
        status, exact_ratio, mats = "screened", None, None
        if ratio > cfg.flag_ratio:
            counters["flagged"] += 1
            mats = lift()
            key = tuple(M.digest() for M in mats)
            if key not in exact_cache:
                rep = t.exact(*mats)
                exact_cache[key] = (rep.violated, _exact_ratio(rep))
            violated, exact_ratio = exact_cache[key]
            if violated:
                counters["confirmed"] += 1
                status = "confirmed"
            else:
                # float flag not confirmed: kept as a non-violation
                counters["cleared"] += 1
                status = "cleared"
        item = (ratio, -i, (status, exact_ratio, mats, lift, float(rhs) - float(lhs)))
        if len(heap) < cfg.top_k:
            heapq.heappush(heap, item)
        elif item[:2] > heap[0][:2]:
            heapq.heapreplace(heap, item)
    out = []
    for ratio, negi, (status, exact_ratio, mats, lift, margin) in heap:
        mats = mats or lift()
        out.append({
            "iteration": -negi,
            "ratio": ratio,
            "margin": margin,
            "status": status,
            "exact_ratio": exact_ratio,
            "digest": "|".join(M.digest()[:16] for M in mats),
            "matrices": [format_matrix(M) for M in mats],
        })
    return out, counters


def _merge(cands, k):
    """Best k by (ratio desc, iteration asc), one entry per instance."""
    seen = set()
    out = []
    for c in sorted(cands, key=lambda c: (-c["ratio"], c["iteration"])):
        if c["digest"] in seen:
            continue
        seen.add(c["digest"])
        out.append(c)
        if len(out) == k:
            break
    return out


def _chunks(start, stop, parts):
    step = -(-(stop - start) // parts)
    return [(s, min(s + step, stop)) for s in range(start, stop, step)]


def search(state_or_config, budget, workers=1, max_seconds=None):
    """Advance a search by `budget` iterations (or until `max_seconds`).

    Returns the updated SearchState; the input state is not modified.
    """
    if isinstance(state_or_config, SearchConfig):
        state = SearchState(state_or_config.validate())
    else:
        s = state_or_config
        state = SearchState(s.config, s.next_iteration, dict(s.counters), list(s.candidates))
    cfg = state.config
    if budget < 0:
        raise PermlabError("budget must be nonnegative")
    start = state.next_iteration
    stop = start + budget
    t0 = time.monotonic()
    pos = start
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while pos < stop:
            end = min(stop, pos + BLOCK * max(workers, 1)) if max_seconds is not None else stop
            ranges = _chunks(pos, end, max(workers, 1))
            if pool is not None:
                results = list(pool.map(_run_range, [cfg] * len(ranges), *zip(*ranges)))
            else:
                results = [_run_range(cfg, a, b) for a, b in ranges]
            merged = list(state.candidates)
            for cands, counters in results:
                merged += cands
                for key, v in counters.items():
                    state.counters[key] = state.counters.get(key, 0) + v
            state.candidates = _merge(merged, cfg.top_k)
            pos = end
            state.next_iteration = pos
            if max_seconds is not None and time.monotonic() - t0 >= max_seconds:
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return state
