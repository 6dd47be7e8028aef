"""Command-line pipeline driver.

Subcommands: synth (write a synthetic benchmark), extract (Gabor
features from an image manifest), select-train (fit one of the four
methods and write a model file), evaluate (score a test set against a
model and write report CSVs).

Settings come from flags, optionally backed by a key=value config file
(flags win, then the file, then the built-in defaults shown in --help).
Exit codes: 0 success, 2 bad input, 3 internal numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import gabor, images, matio, modelio, synth
from .convex import ConvexConfig, group_solver, ridge_refit, solve_all_single_task
from .evaluate import average_protocol, person_curves, write_roc_csv, \
    write_summary_csv
from .greedy import GreedyConfig, omp, somp
from .model import Coefficients, build_indicator, predict
from .modelio import TrainedModel

__all__ = ["main"]

_UNSET = object()

METHODS = ("stl-omp", "mtl-somp", "stl-lasso", "mtl-group")


def _cast_int(s):
    return int(s)


def _cast_float(s):
    v = float(s)
    if np.isnan(v):
        raise ValueError("value must not be NaN")
    return v


def _cast_q(s):
    if str(s) in ("2", "2.0"):
        return 2.0
    if str(s) == "inf":
        return np.inf
    raise ValueError("q must be 2 or inf")


def _cast_choice(options):
    def cast(s):
        if s not in options:
            raise ValueError("expected one of %s, got %r" % (options, s))
        return s
    return cast


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def _read_config_file(path) -> dict:
    out = {}
    with open(path, "r") as fh:
        for n, line in enumerate(fh.read().splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            key, sep, value = stripped.partition("=")
            if not sep:
                raise ValueError("config line %d: expected key=value" % n)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _merge(args, spec) -> dict:
    """Resolve settings: explicit flag, then config file, then default."""
    file_cfg = {}
    if getattr(args, "config", None):
        file_cfg = _read_config_file(args.config)
    unknown = set(file_cfg) - {dest for dest, _, _ in spec}
    if unknown:
        raise ValueError("unknown config keys: %s" % ", ".join(sorted(unknown)))
    merged = {}
    for dest, default, cast in spec:
        raw = getattr(args, dest)
        if raw is not _UNSET:
            merged[dest] = cast(raw)
        elif dest in file_cfg:
            merged[dest] = cast(file_cfg[dest])
        else:
            merged[dest] = default
    return merged


def _write_manifest(path, entries) -> None:
    lines = ["%s,%s" % (k, _fmt(v)) for k, v in entries]
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    for line in lines:
        print(line)


SYNTH_SPEC = [
    ("kind", "regression", _cast_choice(("regression", "classification"))),
    ("n", 200, _cast_int),
    ("d", 500, _cast_int),
    ("tasks", 10, _cast_int),
    ("k", 8, _cast_int),
    ("snr", 100.0, _cast_float),
    ("share_fraction", 1.0, _cast_float),
    ("seed", 0, _cast_int),
    ("per_class", 5, _cast_int),
    ("background", 100, _cast_int),
    ("test_per_class", 20, _cast_int),
]


def cmd_synth(args) -> int:
    cfg = _merge(args, SYNTH_SPEC)
    os.makedirs(args.out_dir, exist_ok=True)
    spec = synth.SynthSpec(N=cfg["n"], d=cfg["d"], L=cfg["tasks"], k=cfg["k"],
                           snr=cfg["snr"], share_fraction=cfg["share_fraction"],
                           seed=cfg["seed"])
    entries = [("kind", cfg["kind"]), ("d", spec.d), ("tasks", spec.L),
               ("k", spec.k), ("snr", spec.snr),
               ("share_fraction", spec.share_fraction), ("seed", spec.seed)]
    if cfg["kind"] == "regression":
        X, Y, C = synth.synth_regression(spec)
        matio.save_matrix(os.path.join(args.out_dir, "x.ssa1"), X)
        matio.save_matrix(os.path.join(args.out_dir, "y.ssa1"), Y)
        matio.save_matrix(os.path.join(args.out_dir, "c_true.ssa1"), C)
        entries += [("n", spec.N),
                    ("files", "x.ssa1;y.ssa1;c_true.ssa1")]
    else:
        split = synth.synth_classification(spec, cfg["per_class"],
                                           cfg["background"],
                                           cfg["test_per_class"])
        X_train, ind = split.train
        X_test, test_labels = split.test
        train_labels = []
        for i in range(X_train.shape[0]):
            row = ind.matrix[i]
            train_labels.append(int(np.argmax(row)) if row.any() else None)
        matio.save_matrix(os.path.join(args.out_dir, "train_x.ssa1"), X_train)
        matio.save_labels(os.path.join(args.out_dir, "train_labels.csv"),
                          train_labels)
        matio.save_matrix(os.path.join(args.out_dir, "test_x.ssa1"), X_test)
        matio.save_labels(os.path.join(args.out_dir, "test_labels.csv"),
                          test_labels)
        entries += [("per_class", cfg["per_class"]),
                    ("background", cfg["background"]),
                    ("test_per_class", cfg["test_per_class"]),
                    ("train_n", X_train.shape[0]),
                    ("test_n", X_test.shape[0]),
                    ("files", "train_x.ssa1;train_labels.csv;"
                              "test_x.ssa1;test_labels.csv")]
    _write_manifest(os.path.join(args.out_dir, "manifest.csv"), entries)
    return 0


EXTRACT_SPEC = [
    ("crop", 64, _cast_int),
    ("scales", 5, _cast_int),
    ("orientations", 8, _cast_int),
    ("kernel_size", 33, _cast_int),
]


def _parse_manifest(path):
    base = os.path.dirname(os.path.abspath(path))
    rows = []
    with open(path, "r") as fh:
        for n, line in enumerate(fh.read().splitlines(), start=1):
            if not line.strip():
                continue
            toks = line.split(",")
            if len(toks) != 6:
                raise ValueError(
                    "manifest line %d: expected path,lx,ly,rx,ry,label" % n)
            try:
                lx, ly, rx, ry = (float(t) for t in toks[1:5])
                label = None if toks[5] == "-" else int(toks[5])
            except ValueError:
                raise ValueError("manifest line %d: bad numeric field" % n)
            img_path = toks[0]
            if not os.path.isabs(img_path):
                img_path = os.path.join(base, img_path)
            rows.append((img_path, (lx, ly), (rx, ry), label))
    if not rows:
        raise ValueError("manifest is empty")
    return rows


def cmd_extract(args) -> int:
    cfg = _merge(args, EXTRACT_SPEC)
    rows = _parse_manifest(args.manifest)
    os.makedirs(args.out_dir, exist_ok=True)
    bank = gabor.build_filter_bank(scales=cfg["scales"],
                                   orientations=cfg["orientations"],
                                   kernel_size=cfg["kernel_size"])
    feats = []
    labels = []
    for img_path, eye_l, eye_r, label in rows:
        img = images.load_image(img_path)
        face = gabor.align_and_crop(img, eye_l, eye_r, crop=cfg["crop"])
        feats.append(gabor.extract(face, bank))
        labels.append(label)
    matio.save_matrix(os.path.join(args.out_dir, "features.ssa1"),
                      np.vstack(feats))
    matio.save_labels(os.path.join(args.out_dir, "labels.csv"), labels)
    return 0


TRAIN_SPEC = [
    ("method", "mtl-somp", _cast_choice(METHODS)),
    ("budget", 300, _cast_int),
    ("lam", 0.1, _cast_float),
    ("alpha", 1.0, _cast_float),
    ("q", np.inf, _cast_q),
    ("seed", 0, _cast_int),
    ("refit", "none", _cast_choice(("none", "ridge"))),
    ("rel_tol", 1e-8, _cast_float),
    ("max_iters", 10000, _cast_int),
]


def _support_rows_capped(norms, budget):
    """Rows with norm above 1e-6 of the largest, at most budget of them."""
    max_norm = float(norms.max(initial=0.0))
    alive = np.nonzero(norms > 1e-6 * max_norm)[0] if max_norm > 0 else \
        np.array([], dtype=np.intp)
    if alive.size > budget:
        order = np.argsort(-norms[alive], kind="stable")
        alive = alive[order[:budget]]
    return sorted(int(i) for i in alive)


def _labels_to_indicator(labels):
    known = [l for l in labels if l is not None]
    if not known:
        raise ValueError("labels contain no known classes")
    n_classes = max(known) + 1
    return build_indicator(labels, n_classes)


def cmd_select_train(args) -> int:
    cfg = _merge(args, TRAIN_SPEC)
    X = matio.load_matrix(args.train_x)
    labels = matio.load_labels(args.train_labels)
    if len(labels) != X.shape[0]:
        raise ValueError("label count does not match matrix rows")
    ind = _labels_to_indicator(labels)
    d, L = X.shape[1], ind.matrix.shape[1]
    method = cfg["method"]
    warnings = []
    converged = None

    if method == "stl-omp":
        gcfg = GreedyConfig(max_features=cfg["budget"])
        W = np.zeros((d, L))
        biases = np.zeros(L)
        supports = []
        for l in range(L):
            fit = omp(X, ind.matrix[:, l], gcfg)
            W[:, l] = fit.coefficients.weights[:, 0]
            biases[l] = fit.coefficients.biases[0]
            supports.append(sorted(fit.support))
            warnings += ["task %d: %s" % (l, w) for w in fit.warnings]
        shared = False
    elif method == "mtl-somp":
        gcfg = GreedyConfig(max_features=cfg["budget"])
        fit = somp(X, ind, gcfg)
        W = fit.coefficients.weights
        biases = fit.coefficients.biases
        supports = [sorted(fit.support) for _ in range(L)]
        warnings += fit.warnings
        shared = True
    elif method == "stl-lasso":
        ccfg = ConvexConfig(lam=cfg["lam"], max_iters=cfg["max_iters"],
                            rel_tol=cfg["rel_tol"])
        fit = solve_all_single_task(X, ind, ccfg)
        converged = fit.converged
        W0 = fit.coefficients.weights
        supports = [_support_rows_capped(np.abs(W0[:, l]), cfg["budget"])
                    for l in range(L)]
        W = np.zeros((d, L))
        for l, sup in enumerate(supports):
            W[sup, l] = W0[sup, l]
        # dropping sub-threshold weights shifts the optimal intercept
        biases = ind.matrix.mean(axis=0) - X.mean(axis=0) @ W
        shared = False
    else:
        ccfg = ConvexConfig(lam=cfg["lam"], max_iters=cfg["max_iters"],
                            rel_tol=cfg["rel_tol"], q=cfg["q"])
        fit = group_solver(X, ind, ccfg)
        converged = fit.converged
        W0 = fit.coefficients.weights
        if np.isinf(cfg["q"]):
            norms = np.abs(W0).max(axis=1)
        else:
            norms = np.sqrt(np.einsum("ij,ij->i", W0, W0))
        sup = _support_rows_capped(norms, cfg["budget"])
        supports = [list(sup) for _ in range(L)]
        W = np.zeros((d, L))
        W[sup, :] = W0[sup, :]
        biases = ind.matrix.mean(axis=0) - X.mean(axis=0) @ W
        shared = True

    if converged is False:
        warnings.append("solver did not converge within max_iters")

    if cfg["refit"] == "ridge":
        if shared:
            if supports[0]:
                coef = ridge_refit(X, ind, supports[0], cfg["alpha"])
                W, biases = coef.weights, coef.biases
            else:
                warnings.append("empty support, ridge refit skipped")
        else:
            for l in range(L):
                if not supports[l]:
                    warnings.append(
                        "task %d: empty support, ridge refit skipped" % l)
                    continue
                coef = ridge_refit(X, ind.matrix[:, l][:, None],
                                   supports[l], cfg["alpha"])
                W[:, l] = coef.weights[:, 0]
                biases[l] = coef.biases[0]

    config_echo = {
        "method": method,
        "budget": _fmt(cfg["budget"]),
        "lambda": _fmt(cfg["lam"]),
        "alpha": _fmt(cfg["alpha"]),
        "q": "inf" if np.isinf(cfg["q"]) else _fmt(cfg["q"]),
        "seed": _fmt(cfg["seed"]),
        "refit": cfg["refit"],
        "rel_tol": _fmt(cfg["rel_tol"]),
        "max_iters": _fmt(cfg["max_iters"]),
        "converged": _fmt(converged),
        "d": str(d),
        "tasks": str(L),
    }
    model = TrainedModel(Coefficients(weights=W, biases=np.asarray(biases)),
                         supports, shared, config_echo, warnings)
    os.makedirs(args.out_dir, exist_ok=True)
    modelio.save_model(os.path.join(args.out_dir, "model.csv"), model)
    for w in warnings:
        print("warning: %s" % w, file=sys.stderr)
    return 0


EVAL_SPEC = [
    ("fpr_grid_step", 0.001, _cast_float),
]


def cmd_evaluate(args) -> int:
    cfg = _merge(args, EVAL_SPEC)
    model = modelio.load_model(args.model)
    X = matio.load_matrix(args.test_x)
    labels = matio.load_labels(args.test_labels)
    if len(labels) != X.shape[0]:
        raise ValueError("label count does not match matrix rows")
    if any(l is None for l in labels):
        raise ValueError("test labels must not contain background samples")
    d = model.coefficients.weights.shape[0]
    if X.shape[1] != d:
        raise ValueError("test features have %d columns, model expects %d"
                         % (X.shape[1], d))
    step = cfg["fpr_grid_step"]
    if not 0.0 < step <= 1.0:
        raise ValueError("fpr_grid_step must lie in (0, 1]")
    n_steps = round(1.0 / step)
    if abs(n_steps * step - 1.0) > 1e-9:
        raise ValueError("fpr_grid_step must divide 1 evenly")
    grid = np.linspace(0.0, 1.0, n_steps + 1)

    scores = predict(X, model.coefficients)
    curves = person_curves(scores, np.asarray(labels, dtype=np.intp))
    report = average_protocol(curves, grid)

    method = model.config.get("method", "unknown")
    if model.config.get("refit") == "ridge":
        method += "+r"
    os.makedirs(args.out_dir, exist_ok=True)
    write_roc_csv(os.path.join(args.out_dir, "roc_avg.csv"), report)
    write_summary_csv(os.path.join(args.out_dir, "summary.csv"),
                      [(method, report)])
    return 0


def _add_spec_flags(parser, spec, help_map) -> None:
    for dest, default, _ in spec:
        flag = "--" + dest.replace("_", "-")
        if dest == "lam":
            flag = "--lambda"
        parser.add_argument(flag, dest=dest, default=_UNSET,
                            help="%s (default: %s)"
                                 % (help_map.get(dest, dest), _fmt(default)))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jointsparse",
        description="Sparse joint feature selection pipeline: synthesize "
                    "benchmarks, extract Gabor features, train STL/MTL "
                    "selectors, and evaluate verification ROC curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic benchmark")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--config", help="key=value config file (flags win)")
    _add_spec_flags(p, SYNTH_SPEC, {
        "kind": "regression or classification",
        "n": "samples (regression)",
        "d": "features",
        "tasks": "tasks / classes",
        "k": "planted support size",
        "snr": "signal-to-noise ratio",
        "share_fraction": "fraction of support shared by all tasks",
        "seed": "generator seed",
        "per_class": "train positives per class (classification)",
        "background": "train background samples (classification)",
        "test_per_class": "test samples per class (classification)",
    })
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("extract", help="Gabor features from an image manifest")
    p.add_argument("--manifest", required=True,
                   help="CSV rows: path,lx,ly,rx,ry,label ('-' = background)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--config", help="key=value config file (flags win)")
    _add_spec_flags(p, EXTRACT_SPEC, {
        "crop": "aligned face size in pixels",
        "scales": "Gabor scales",
        "orientations": "Gabor orientations",
        "kernel_size": "kernel window size (odd)",
    })
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("select-train", help="fit a selector, write model.csv")
    p.add_argument("--train-x", required=True)
    p.add_argument("--train-labels", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--config", help="key=value config file (flags win)")
    _add_spec_flags(p, TRAIN_SPEC, {
        "method": "one of %s" % (METHODS,),
        "budget": "max selected features K",
        "lam": "l1 / mixed-norm weight",
        "alpha": "ridge refit strength",
        "q": "row norm for mtl-group: 2 or inf",
        "seed": "echoed into the model file",
        "refit": "none or ridge",
        "rel_tol": "solver relative tolerance",
        "max_iters": "solver iteration cap",
    })
    p.set_defaults(func=cmd_select_train)

    p = sub.add_parser("evaluate", help="score a test set, write report CSVs")
    p.add_argument("--model", required=True)
    p.add_argument("--test-x", required=True)
    p.add_argument("--test-labels", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--config", help="key=value config file (flags win)")
    _add_spec_flags(p, EVAL_SPEC, {"fpr_grid_step": "FPR grid spacing"})
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    # LinAlgError subclasses ValueError, so the numerical branch must come
    # first or it would be swallowed by the bad-input handler.
    except (np.linalg.LinAlgError, FloatingPointError, ZeroDivisionError) as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
