"""Constrained combinatorial optimization problems over N-bit strings.

Bit order is big-endian everywhere in the package: the leftmost bit is qubit 1
and the most significant bit of the basis index, so ``"0101"`` is index 5.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .config import TOL
from .errors import InfeasibleProblemError, ProblemFormatError

MAX_QUBITS = 12


def bits_of(index: int, n: int) -> tuple[int, ...]:
    if not 0 <= index < 1 << n:
        raise ValueError(f"index {index} out of range for {n} bits")
    return tuple((index >> (n - 1 - k)) & 1 for k in range(n))


def index_of(bits: Sequence[int]) -> int:
    out = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"not a bit: {b!r}")
        out = (out << 1) | int(b)
    return out


def bitstring(index: int, n: int) -> str:
    return "".join(map(str, bits_of(index, n)))


def parse_bitstring(s: str, n: int) -> int:
    if len(s) != n or set(s) - {"0", "1"}:
        raise ProblemFormatError(f"invalid {n}-bit string {s!r}")
    return int(s, 2)


def _bit_table(n: int) -> np.ndarray:
    """(2^n, n) array of bits, row i = bits_of(i)."""
    idx = np.arange(1 << n)
    return (idx[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1


@dataclass(frozen=True, eq=False)
class Cop:
    """A maximization problem ``max f(z)`` over feasible ``z`` in ``{0,1}^n``.

    ``values[i]`` is the objective of the string with big-endian index ``i`` and
    ``feasible[i]`` its feasibility; both cover all ``2^n`` strings.
    """

    n: int
    values: np.ndarray
    feasible: np.ndarray
    name: str = "cop"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"n must be in [1, {MAX_QUBITS}], got {self.n}")
        values = np.asarray(self.values, dtype=float)
        feasible = np.asarray(self.feasible, dtype=bool)
        if values.shape != (1 << self.n,) or feasible.shape != (1 << self.n,):
            raise ValueError("objective and feasibility must be defined on all 2^n strings")
        if not np.all(np.isfinite(values)):
            raise ValueError("objective values must be finite reals")
        values.setflags(write=False)
        feasible.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "feasible", feasible)

    @classmethod
    def from_functions(cls, n: int, objective: Callable, feasibility: Callable | None = None, name="cop"):
        strings = [bits_of(i, n) for i in range(1 << n)]
        values = [float(objective(z)) for z in strings]
        feas = [True if feasibility is None else bool(feasibility(z)) for z in strings]
        return cls(n, np.array(values), np.array(feas), name=name)

    @property
    def dim(self) -> int:
        return 1 << self.n

    def f(self, z) -> float:
        i = z if isinstance(z, (int, np.integer)) else index_of(z)
        return float(self.values[i])

    def is_feasible(self, z) -> bool:
        i = z if isinstance(z, (int, np.integer)) else index_of(z)
        return bool(self.feasible[i])

    @property
    def unconstrained(self) -> bool:
        return bool(self.feasible.all())


@dataclass(frozen=True)
class SolutionReport:
    feasible_indices: tuple[int, ...]
    optimal_indices: tuple[int, ...]
    f_max: float

    def optimal_strings(self, n: int) -> list[str]:
        return [bitstring(i, n) for i in self.optimal_indices]


def solve_brute_force(p: Cop) -> SolutionReport:
    """Enumerate all 2^n strings; ties with ``f_max`` within ``TOL.f_tie`` are optimal."""
    feasible = [i for i in range(p.dim) if p.feasible[i]]
    if not feasible:
        raise InfeasibleProblemError(f"{p.name}: no feasible bit string")
    f_max = max(float(p.values[i]) for i in feasible)
    optimal = [i for i in feasible if abs(float(p.values[i]) - f_max) <= TOL.f_tie]
    return SolutionReport(tuple(feasible), tuple(optimal), f_max)


def _check_edges(n: int, edges) -> list[tuple[int, int]]:
    out = []
    for e in edges:
        try:
            a, b = (int(x) for x in e)
        except (TypeError, ValueError):
            raise ValueError(f"edge {e!r} is not a vertex pair") from None
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"edge {e!r} has a vertex outside [0, {n})")
        if a == b:
            raise ValueError(f"self-loop {e!r}")
        out.append((a, b))
    return out


def cut_values(n: int, edges) -> np.ndarray:
    bits = _bit_table(n)
    vals = np.zeros(1 << n)
    for a, b in _check_edges(n, edges):
        vals += bits[:, a] != bits[:, b]
    return vals


def independent_mask(n: int, edges) -> np.ndarray:
    bits = _bit_table(n)
    ok = np.ones(1 << n, dtype=bool)
    for a, b in _check_edges(n, edges):
        ok &= ~((bits[:, a] == 1) & (bits[:, b] == 1))
    return ok


def one_hot_mask(n: int, groups) -> np.ndarray:
    bits = _bit_table(n)
    ok = np.ones(1 << n, dtype=bool)
    for g in groups:
        g = [int(q) for q in g]
        if any(not 0 <= q < n for q in g):
            raise ValueError(f"group {g} has a qubit outside [0, {n})")
        ok &= bits[:, g].sum(axis=1) == 1
    return ok


def make_maxcut(n: int, edges: Iterable) -> Cop:
    edges = _check_edges(n, edges)
    return Cop(n, cut_values(n, edges), np.ones(1 << n, dtype=bool), name="maxcut",
               meta={"edges": [list(e) for e in edges]})


def make_max_independent_set(n: int, edges: Iterable) -> Cop:
    edges = _check_edges(n, edges)
    weight = _bit_table(n).sum(axis=1).astype(float)
    return Cop(n, weight, independent_mask(n, edges), name="max_independent_set",
               meta={"edges": [list(e) for e in edges]})


def load_problem(doc: dict) -> Cop:
    """Build a ``Cop`` from a problem-definition document (parsed JSON).

    The ``mixer`` / ``mixer_kind`` keys are ignored here; see
    ``hamiltonians.mixing_family_from_doc``.
    """
    if not isinstance(doc, dict):
        raise ProblemFormatError("problem document must be a JSON object")
    try:
        n = doc["n"]
        obj = doc["objective"]
    except KeyError as exc:
        raise ProblemFormatError(f"missing key {exc.args[0]!r}") from None
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= MAX_QUBITS:
        raise ProblemFormatError(f"'n' must be an integer in [1, {MAX_QUBITS}]")
    feas = doc.get("feasible", {"type": "all"})
    if not isinstance(obj, dict) or not isinstance(feas, dict):
        raise ProblemFormatError("'objective' and 'feasible' must be objects")

    try:
        kind = obj.get("type")
        if kind == "maxcut":
            values = cut_values(n, obj["edges"])
        elif kind == "mis_weight":
            values = _bit_table(n).sum(axis=1).astype(float)
        elif kind == "table":
            values = np.asarray(obj["values"], dtype=float)
            if values.shape != (1 << n,):
                raise ProblemFormatError(f"table has {values.size} entries, expected {1 << n}")
        else:
            raise ProblemFormatError(f"unknown objective type {kind!r}")

        kind = feas.get("type")
        if kind == "all":
            mask = np.ones(1 << n, dtype=bool)
        elif kind == "list":
            mask = np.zeros(1 << n, dtype=bool)
            strings = feas["strings"]
            if not isinstance(strings, list):
                raise ProblemFormatError("'strings' must be a list")
            for s in strings:
                if not isinstance(s, str):
                    raise ProblemFormatError(f"feasible entry {s!r} is not a bit string")
                mask[parse_bitstring(s, n)] = True
        elif kind == "independent_set":
            mask = independent_mask(n, feas["edges"])
        elif kind == "one_hot":
            mask = one_hot_mask(n, feas["groups"])
        else:
            raise ProblemFormatError(f"unknown feasibility type {kind!r}")
    except KeyError as exc:
        raise ProblemFormatError(f"missing key {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ProblemFormatError):
            raise
        raise ProblemFormatError(str(exc)) from None

    return Cop(n, values, mask, name=doc.get("name", obj["type"]), meta={"doc": doc})
