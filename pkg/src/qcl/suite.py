"""Built-in problem documents shared by the tests and the example configs."""
from __future__ import annotations

import copy

_SUITE = {
    # one qubit, B = sigma_x, C = diag(1, 0): unique optimum "0"
    "toy": {"n": 1, "objective": {"type": "table", "values": [1.0, 0.0]}},
    # MaxCut on the 4-cycle: optima 0101 and 1010
    "cycle4": {"n": 4, "objective": {"type": "maxcut", "edges": [[0, 1], [1, 2], [2, 3], [3, 0]]}},
    # MaxCut on the triangle: six optimal cuts of value 2
    "triangle": {"n": 3, "objective": {"type": "maxcut", "edges": [[0, 1], [1, 2], [0, 2]]}},
    # unique optimum 011 with negative entries (exercises the shift)
    "table3": {"n": 3, "objective": {"type": "table",
                                     "values": [0.3, 1.2, -0.5, 2.0, 0.7, 1.1, -1.0, 0.4]}},
    # maximum independent set on the path 0-1-2 with the controlled-X family: unique optimum 101
    "mis_path3": {
        "n": 3,
        "objective": {"type": "mis_weight"},
        "feasible": {"type": "independent_set", "edges": [[0, 1], [1, 2]]},
        "mixer": {"type": "controlled_x"},
    },
    # 2-colouring of the path 0-1-2 encoded one-hot with the XY mixer; optima 011001 and 100110
    "coloring_path3": {
        "n": 6,
        "objective": {"type": "maxcut", "edges": [[0, 2], [1, 3], [2, 4], [3, 5]]},
        "feasible": {"type": "one_hot", "groups": [[0, 1], [2, 3], [4, 5]]},
        "mixer": {"type": "xy_onehot"},
    },
    # single one-hot group of three with a non-uniform objective: non-commuting XY ring
    "onehot3": {
        "n": 3,
        "objective": {"type": "table", "values": [0.0, 0.0, 1.0, 0.0, 3.0, 0.0, 0.0, 0.0]},
        "feasible": {"type": "one_hot", "groups": [[0, 1, 2]]},
        "mixer": {"type": "xy_onehot"},
    },
}

SPECTRAL_SUITE = ("toy", "cycle4", "triangle", "table3", "mis_path3", "coloring_path3")


def names() -> list[str]:
    return list(_SUITE)


def problem(name: str, **extra) -> dict:
    """A fresh copy of a built-in problem document, with optional extra keys."""
    try:
        doc = copy.deepcopy(_SUITE[name])
    except KeyError:
        raise KeyError(f"unknown built-in problem {name!r}; have {names()}") from None
    doc.update(extra)
    return doc
