"""Command-line entry point: ``topsp <subcommand> ...``.

All numbers are written with 17 significant digits so that identical
invocations give byte-identical output. Usage problems (bad flags, unreadable
files) exit with status 2; failures inside a computation exit with status 1.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import classic_dsp, dynamics, filters, interpolation, snn, spectral
from .complex import hodge_laplacian
from .io import FormatError, fmt, format_complex, read_complex, read_labels, read_signal, simplex_label

SUBCOMMANDS = ("info", "classic", "decompose", "denoise", "smooth", "interpolate", "dynamics", "snn")
ORDER_NAMES = {0: "nodes", 1: "edges", 2: "triangles", 3: "tetrahedra"}


@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)
    output: str | None = None


# -- argument types ------------------------------------------------------------


def _positive_float(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (x > 0 and np.isfinite(x)):
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return x


def _nonneg_float(text):
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (x >= 0 and np.isfinite(x)):
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return x


def _positive_int(text):
    try:
        x = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if x < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return x


def _nonneg_int(text):
    try:
        x = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if x < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return x


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _init_spec(text):
    if text.startswith("random:"):
        try:
            return ("random", int(text.split(":", 1)[1]))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad seed in {text!r}") from None
    return ("file", text)


def _simplex_arg(text):
    try:
        return tuple(int(t) for t in text.split("-"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a simplex like 1-3, got {text!r}") from None


def build_parser():
    p = argparse.ArgumentParser(prog="topsp", description="Signal processing on graphs and simplicial complexes.")
    sub = p.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    sub.required = True

    def common(sp):
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")

    sp = sub.add_parser("info", help="simplex counts and Betti numbers")
    sp.add_argument("complex")
    sp.add_argument("--dump", action="store_true", help="print the canonical complex file instead")
    common(sp)

    sp = sub.add_parser("classic", help="cyclic filter via four equivalent computations")
    sp.add_argument("--coeffs", type=_float_list, required=True, help="impulse response c_0,...,c_{n-1}")
    sp.add_argument("--signal", type=_float_list, help="input signal (default: unit impulse)")
    common(sp)

    sp = sub.add_parser("decompose", help="Hodge decomposition of a signal")
    sp.add_argument("complex")
    sp.add_argument("signal")
    common(sp)

    for name in ("denoise", "smooth"):
        sp = sub.add_parser(name, help="add seeded noise to a clean signal and filter it")
        sp.add_argument("complex")
        sp.add_argument("signal", help="clean (ground truth) signal")
        sp.add_argument("--order", type=int, choices=(0, 1))
        sp.add_argument("--regularizer", choices=("hodge", "edge", "line-graph"), default="hodge")
        sp.add_argument("--alpha", type=_positive_float, default=0.5)
        sp.add_argument("--mu", type=_positive_float, default=None if name == "denoise" else 0.1)
        sp.add_argument("--steps", type=_positive_int, default=None if name == "denoise" else 10)
        sp.add_argument("--sigma", type=_nonneg_float, default=0.5)
        sp.add_argument("--seed", type=_nonneg_int, default=0)
        sp.add_argument("--trials", type=_positive_int, default=1)
        common(sp)

    sp = sub.add_parser("interpolate", help="fill in unlabeled values")
    sp.add_argument("complex")
    sp.add_argument("labels")
    sp.add_argument("--order", type=int, choices=(0, 1))
    sp.add_argument("--alpha", type=_nonneg_float, default=0.1)
    sp.add_argument("--use-triangles", action="store_true")
    sp.add_argument("--truth", help="full signal file to score against")
    common(sp)

    sp = sub.add_parser("dynamics", help="simulate Hodge-Laplacian dynamics")
    sp.add_argument("complex")
    sp.add_argument("--order", type=_nonneg_int, default=1)
    sp.add_argument("--dt", type=_positive_float, default=0.05)
    sp.add_argument("--t-max", type=_nonneg_float, default=10.0)
    sp.add_argument("--method", choices=("spectral", "euler"))
    sp.add_argument("--nonlinearity", choices=("identity", "tanh"), default="identity")
    sp.add_argument("--init", type=_init_spec, default=("random", 0), help="signal file or random:SEED")
    sp.add_argument("--every", type=_positive_int, default=1, help="emit every N-th grid point")
    common(sp)

    sp = sub.add_parser("snn", help="simplicial neural network")
    sp.add_argument("action", choices=("forward", "train", "equivariance"))
    sp.add_argument("model", help="JSON model spec")
    sp.add_argument("complex")
    sp.add_argument("--features", action="append", default=[], help="feature signal file (repeat per column)")
    sp.add_argument("--targets", action="append", default=[], help="target signal file (repeat per column)")
    sp.add_argument("--lr", type=_nonneg_float, default=0.1)
    sp.add_argument("--epochs", type=_positive_int, default=100)
    sp.add_argument("--flip", type=_simplex_arg, action="append", default=[], help="simplex to re-orient, e.g. 1-3")
    sp.add_argument("--save", help="write trained parameters to this JSON file")
    common(sp)
    return p


_PATH_OPTIONS = ("complex", "signal", "labels", "truth", "model")


def parse_args(argv=None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    opts = vars(ns).copy()
    sub = opts.pop("subcommand")
    output = opts.pop("output", None)

    paths = [opts[k] for k in _PATH_OPTIONS if isinstance(opts.get(k), str)]
    paths += opts.get("features", []) + opts.get("targets", [])
    if sub == "dynamics" and opts["init"][0] == "file":
        paths.append(opts["init"][1])
    for path in paths:
        if not os.path.isfile(path) or not os.access(path, os.R_OK):
            parser.error(f"cannot read file: {path}")

    if sub == "dynamics" and opts["nonlinearity"] != "identity" and opts["method"] == "spectral":
        parser.error("--method spectral only applies to the linear dynamics (--nonlinearity identity)")
    if sub == "denoise" and (opts["steps"] is not None) and opts["mu"] is None:
        parser.error("--steps needs --mu")
    if sub == "classic" and opts["signal"] is not None and len(opts["signal"]) != len(opts["coeffs"]):
        parser.error("--signal and --coeffs must have the same length")
    if sub == "snn":
        if not opts["features"]:
            parser.error("snn needs at least one --features file")
        if opts["action"] == "train" and not opts["targets"]:
            parser.error("snn train needs --targets")
    return RunConfig(sub, opts, output)


# -- output helpers -------------------------------------------------------------


class _Table:
    def __init__(self, header):
        self.buf = _io.StringIO()
        self.w = csv.writer(self.buf, lineterminator="\n")
        self.w.writerow(header)

    def row(self, *cells):
        self.w.writerow([fmt(c) if isinstance(c, (float, np.floating)) else c for c in cells])

    def text(self):
        return self.buf.getvalue()


def _load_signal(path, X, order=None):
    k, values = read_signal(path, X)
    if order is not None and k != order:
        raise FormatError(f"{path}: signal is of order {k}, expected {order}")
    return k, values


# -- subcommands ----------------------------------------------------------------


def _cmd_info(o):
    X = read_complex(o["complex"])
    if o["dump"]:
        return format_complex(X)
    t = _Table(["quantity", "value"])
    for k in range(X.max_order + 1):
        t.row(ORDER_NAMES.get(k, f"simplices_{k}"), X.count(k))
    for k in range(X.max_order + 1):
        t.row(f"b_{k}", spectral.betti(X, k))
    return t.text()


def _cmd_classic(o):
    c = np.array(o["coeffs"])
    s = np.array(o["signal"]) if o["signal"] is not None else np.eye(c.size)[0]
    outs = [
        classic_dsp.apply_filter_matrix(c, s),
        classic_dsp.apply_filter_convolution(c, s),
        classic_dsp.apply_filter_shift_form(c, s),
        classic_dsp.apply_filter_state_space(c, s),
    ]
    resp = classic_dsp.frequency_response(c)
    t = _Table(["t", "signal", "coeff", "out_matrix", "out_convolution", "out_shift", "out_state_space",
                "response_real", "response_imag"])
    for i in range(c.size):
        t.row(i, float(s[i]), float(c[i]), *(float(x[i]) for x in outs), float(resp[i].real), float(resp[i].imag))
    return t.text()


def _cmd_decompose(o):
    X = read_complex(o["complex"])
    k, f = _load_signal(o["signal"], X)
    d = spectral.hodge_decompose(X, f, k)
    t = _Table(["edge" if k == 1 else "simplex", "input", "gradient", "curl", "harmonic"])
    for i, s in enumerate(X.simplices(k)):
        t.row(simplex_label(s), float(f[i]), float(d.gradient[i]), float(d.curl[i]), float(d.harmonic[i]))
    n = d.norms()
    t.row("norm", float(np.linalg.norm(f)), n["gradient"], n["curl"], n["harmonic"])
    return t.text()


def _cmd_denoise(o, iterative=False):
    X = read_complex(o["complex"])
    k, truth = _load_signal(o["signal"], X, o["order"])
    reg = o["regularizer"].replace("-", "_")
    if k == 0:
        if reg != "hodge":
            raise ValueError("node signals only support --regularizer hodge (the graph Laplacian)")
        ops = {"hodge": hodge_laplacian(X, 0)}
    elif k == 1:
        ops = {name: filters.regularizer(X, name) for name in filters.REGULARIZERS}
    else:
        ops = {"hodge": hodge_laplacian(X, k)}
    use_iterative = iterative or o["mu"] is not None
    steps = o["steps"] if o["steps"] is not None else 1

    def apply(Q, y):
        if use_iterative:
            return filters.smooth_iterative(Q, y, o["mu"], steps)
        return filters.denoise_tikhonov(Q, y, o["alpha"])

    label = "edge" if k == 1 else "simplex"
    if o["trials"] == 1:
        y = truth + filters.gaussian_noise(truth.size, o["sigma"], o["seed"])
        est = apply(ops[reg], y)
        t = _Table([label, "noisy", "denoised", "truth"])
        for i, s in enumerate(X.simplices(k)):
            t.row(simplex_label(s), float(y[i]), float(est[i]), float(truth[i]))
        t.row("error_norm", float(np.linalg.norm(y - truth)), float(np.linalg.norm(est - truth)), 0.0)
        return t.text()

    names = list(ops)
    t = _Table(["seed", "noisy", *names])
    errs = {n: [] for n in ["noisy", *names]}
    for seed in range(o["seed"], o["seed"] + o["trials"]):
        y = truth + filters.gaussian_noise(truth.size, o["sigma"], seed)
        errs["noisy"].append(float(np.linalg.norm(y - truth)))
        for n in names:
            errs[n].append(float(np.linalg.norm(apply(ops[n], y) - truth)))
        t.row(seed, *(errs[n][-1] for n in ["noisy", *names]))
    arr = {n: np.array(v) for n, v in errs.items()}
    t.row("mean", *(float(arr[n].mean()) for n in ["noisy", *names]))
    t.row("stderr", *(float(arr[n].std(ddof=1) / np.sqrt(arr[n].size)) for n in ["noisy", *names]))
    return t.text()


def _cmd_interpolate(o):
    X = read_complex(o["complex"])
    k, labels = read_labels(o["labels"], X)
    if o["order"] is not None and k != o["order"]:
        raise FormatError(f"{o['labels']}: labels are of order {k}, expected {o['order']}")
    if k == 0:
        est = interpolation.interpolate_node_labels(X, labels)
    elif k == 1:
        est = interpolation.interpolate_edge_flow(X, labels, o["alpha"], o["use_triangles"])
    else:
        raise ValueError("interpolation supports node (order 0) and edge (order 1) labels")
    truth = _load_signal(o["truth"], X, k)[1] if o["truth"] else None
    labeled = set(labels.labeled_indices.tolist())
    header = ["simplex", "labeled", "value"] + (["truth"] if truth is not None else [])
    t = _Table(header)
    for i, s in enumerate(X.simplices(k)):
        cells = [simplex_label(s), int(i in labeled), float(est[i])]
        if truth is not None:
            cells.append(float(truth[i]))
        t.row(*cells)
    if truth is not None:
        t.row("pearson", "", interpolation.pearson(truth, est), "")
        t.row("error_norm", "", float(np.linalg.norm(truth - est)), "")
    return t.text()


def _cmd_dynamics(o):
    X = read_complex(o["complex"])
    k = o["order"]
    if k > X.max_order:
        raise ValueError(f"order {k} not present in complex")
    kind, arg = o["init"]
    if kind == "random":
        w0 = dynamics.random_initial_state(X.count(k), arg)
    else:
        w0 = _load_signal(arg, X, k)[1]
    method = o["method"] or ("spectral" if o["nonlinearity"] == "identity" else "euler")
    if o["nonlinearity"] == "identity":
        traj = dynamics.simulate_hodge_flow(
            X, k, w0, o["dt"], o["t_max"], "exact_spectral" if method == "spectral" else "euler"
        )
    else:
        traj = dynamics.simulate_nonlinear(X, k, w0, o["nonlinearity"], o["dt"], o["t_max"])
    target = spectral.harmonic_projection(X, w0, k)
    t = _Table(["time", *(f"s_{simplex_label(s)}" for s in X.simplices(k)), "norm", "harmonic_residual"])
    for i in range(0, traj.times.size, o["every"]):
        x = traj.states[i]
        t.row(float(traj.times[i]), *(float(v) for v in x), float(np.linalg.norm(x)),
              float(np.linalg.norm(x - target)))
    return t.text()


def _read_columns(paths, X, order):
    cols = [_load_signal(p, X, order)[1] for p in paths]
    return np.column_stack(cols)


def _cmd_snn(o):
    with open(o["model"], encoding="utf-8") as fh:
        spec = json.load(fh)
    X = read_complex(o["complex"])
    try:
        model = snn.build_model(
            X,
            int(spec["order"]),
            [int(d) for d in spec["dims"]],
            spec.get("activation", "tanh"),
            spec.get("shift", "hodge"),
            int(spec.get("degree", 1)),
            int(spec.get("seed", 0)),
        )
    except KeyError as exc:
        raise ValueError(f"model spec is missing {exc}") from None
    k = model.order
    Y0 = _read_columns(o["features"], X, k)
    action = o["action"]
    if action == "forward":
        out = snn.forward(model, X, Y0)
        t = _Table(["simplex", *(f"out_{j}" for j in range(out.shape[1]))])
        for i, s in enumerate(X.simplices(k)):
            t.row(simplex_label(s), *(float(v) for v in out[i]))
        return t.text()
    if action == "train":
        T = _read_columns(o["targets"], X, k)
        trained, curve = snn.train(model, X, [(Y0, T)], o["lr"], o["epochs"])
        if o["save"]:
            params = [{"weights": l.weights.tolist(), "shift": l.shift.tolist()} for l in trained.layers]
            with open(o["save"], "w", encoding="utf-8") as fh:
                json.dump({**spec, "layers": params}, fh, indent=2)
        t = _Table(["epoch", "loss"])
        for e, loss in enumerate(curve, start=1):
            t.row(e, float(loss))
        return t.text()
    flips = [X.index_of(s) for s in o["flip"]] if o["flip"] else list(range(0, X.count(k), 2))
    rep = snn.check_equivariance(model, X, Y0, flips)
    t = _Table(["metric", "value"])
    t.row("activation", rep.activation)
    t.row("odd_activation", int(rep.odd))
    t.row("flipped", " ".join(simplex_label(X.simplices(k)[i]) for i in flips))
    t.row("max_deviation", rep.max_deviation)
    t.row("equivariant", int(rep.equivariant))
    return t.text()


_DISPATCH = {
    "info": _cmd_info,
    "classic": _cmd_classic,
    "decompose": _cmd_decompose,
    "denoise": _cmd_denoise,
    "smooth": lambda o: _cmd_denoise(o, iterative=True),
    "interpolate": _cmd_interpolate,
    "dynamics": _cmd_dynamics,
    "snn": _cmd_snn,
}


def run(config: RunConfig) -> int:
    try:
        text = _DISPATCH[config.subcommand](config.options)
    except OSError as exc:
        print(f"topsp: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, RuntimeError, FloatingPointError, np.linalg.LinAlgError) as exc:
        msg = str(exc).strip("'\"").splitlines()[0] if str(exc) else type(exc).__name__
        print(f"topsp {config.subcommand}: {msg}", file=sys.stderr)
        return 1
    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
