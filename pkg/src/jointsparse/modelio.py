"""Model persistence as a small self-describing text/CSV hybrid.

Layout, line by line:

    # jointsparse-model v1
    config,<key>,<value>        (config echo, fixed insertion order)
    warning,<text>              (zero or more)
    support,shared,<i>,<i>,...  (or one support,<task>,... line per task)
    biases,<b0>,...,<bL-1>
    w,<row>,<task>,<value>      (nonzero weights, sorted by row then task)

Floats use %.17g so values round-trip exactly.  The config echo must
contain integer entries d and tasks so the dense coefficient matrix can
be rebuilt.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import Coefficients

__all__ = ["TrainedModel", "save_model", "load_model"]

_HEADER = "# jointsparse-model v1"


@dataclass
class TrainedModel:
    """A fitted selector: supports plus coefficients plus provenance.

    supports holds one index list per task; shared marks that all tasks
    use one common support (stored once).  config is an ordered str->str
    echo of the run settings.
    """

    coefficients: Coefficients
    supports: list
    shared: bool
    config: dict
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        L = self.coefficients.weights.shape[1]
        if len(self.supports) != L:
            raise ValueError("need one support per task")
        if self.shared and any(s != self.supports[0] for s in self.supports):
            raise ValueError("shared model requires identical task supports")
        if "d" not in self.config or "tasks" not in self.config:
            raise ValueError("config echo must include d and tasks")


def save_model(path, model: TrainedModel) -> None:
    W = model.coefficients.weights
    biases = model.coefficients.biases
    d, L = W.shape
    lines = [_HEADER]
    for key, value in model.config.items():
        lines.append("config,%s,%s" % (key, value))
    for text in model.warnings:
        lines.append("warning,%s" % text.replace("\n", " "))
    if model.shared:
        sup = ",".join(str(i) for i in model.supports[0])
        lines.append("support,shared%s" % ("," + sup if sup else ""))
    else:
        for l, s in enumerate(model.supports):
            sup = ",".join(str(i) for i in s)
            lines.append("support,%d%s" % (l, "," + sup if sup else ""))
    lines.append("biases," + ",".join("%.17g" % b for b in biases))
    rows, tasks = np.nonzero(W)
    for r, t in zip(rows, tasks):
        lines.append("w,%d,%d,%.17g" % (r, t, W[r, t]))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def load_model(path) -> TrainedModel:
    with open(path, "r") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != _HEADER:
        raise ValueError("not a jointsparse model file")
    config: dict = {}
    warnings: list = []
    supports_raw: dict = {}
    shared = False
    biases = None
    triples = []
    for line in lines[1:]:
        if not line.strip():
            continue
        kind, _, rest = line.partition(",")
        if kind == "config":
            key, _, value = rest.partition(",")
            config[key] = value
        elif kind == "warning":
            warnings.append(rest)
        elif kind == "support":
            toks = rest.split(",") if rest else [""]
            head, idx_toks = toks[0], [t for t in toks[1:] if t != ""]
            indices = [int(t) for t in idx_toks]
            if head == "shared":
                shared = True
                supports_raw["shared"] = indices
            else:
                supports_raw[int(head)] = indices
        elif kind == "biases":
            biases = np.array([float(t) for t in rest.split(",")])
        elif kind == "w":
            r_tok, t_tok, v_tok = rest.split(",")
            triples.append((int(r_tok), int(t_tok), float(v_tok)))
        else:
            raise ValueError("unknown model line kind: %r" % kind)
    if biases is None:
        raise ValueError("model file missing biases line")
    try:
        d = int(config["d"])
        L = int(config["tasks"])
    except (KeyError, ValueError):
        raise ValueError("model config must carry integer d and tasks")
    if biases.shape != (L,):
        raise ValueError("biases length does not match task count")
    W = np.zeros((d, L))
    for r, t, v in triples:
        if not (0 <= r < d and 0 <= t < L):
            raise ValueError("weight triple out of range")
        W[r, t] = v
    if shared:
        supports = [list(supports_raw["shared"]) for _ in range(L)]
    else:
        try:
            supports = [supports_raw[l] for l in range(L)]
        except KeyError:
            raise ValueError("model file missing a per-task support line")
    coef = Coefficients(weights=W, biases=biases)
    return TrainedModel(coef, supports, shared, config, warnings)
