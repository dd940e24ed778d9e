"""A small simplicial convolutional network with analytic gradients.

Each layer computes ``Y <- act(H Y W)`` where ``H`` is a linear combination
of fixed shift matrices built from the boundary operators of the target
order:

* ``"hodge"``: ``H = sum_j c_j L_k^j`` (default ``c = (1, -1/lambda_max)``,
  i.e. ``I - mu L_k``);
* ``"split"``: ``H = c_0 I + c_1 B_k^T B_k + c_2 B_{k+1} B_{k+1}^T`` so the
  lower and upper parts get independent gains.

Both the weight matrices and the shift coefficients are trainable.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

import numpy as np

from .complex import SimplicialComplex, boundary_matrix
from .spectral import eig_sym

ACTIVATIONS = ("identity", "tanh", "relu")
ODD_ACTIVATIONS = ("identity", "tanh")
SHIFTS = ("hodge", "split")


def _act(name, z):
    if name == "identity":
        return z
    if name == "tanh":
        return np.tanh(z)
    if name == "relu":
        return np.maximum(z, 0.0)
    raise ValueError(f"unknown activation {name!r}")


def _act_grad(name, z):
    if name == "identity":
        return np.ones_like(z)
    if name == "tanh":
        return 1.0 - np.tanh(z) ** 2
    if name == "relu":
        return (z > 0).astype(float)
    raise ValueError(f"unknown activation {name!r}")


@dataclass
class LayerParams:
    weights: np.ndarray  # (features in, features out)
    shift: np.ndarray  # coefficients over the model's shift matrices

    def __post_init__(self):
        self.weights = np.atleast_2d(np.asarray(self.weights, dtype=float))
        self.shift = np.atleast_1d(np.asarray(self.shift, dtype=float))
        if self.weights.size == 0 or self.shift.size == 0:
            raise ValueError("layer weights and shift coefficients must be non-empty")
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.shift))):
            raise ValueError("layer parameters must be finite")


@dataclass
class SNNModel:
    order: int
    layers: list
    activation: str = "tanh"
    shift: str = "hodge"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.shift not in SHIFTS:
            raise ValueError(f"unknown shift {self.shift!r}")
        if not self.layers:
            raise ValueError("model needs at least one layer")
        for i, (a, b) in enumerate(zip(self.layers, self.layers[1:])):
            if a.weights.shape[1] != b.weights.shape[0]:
                raise ValueError(
                    f"layer {i + 1} expects {b.weights.shape[0]} input features, layer {i} gives {a.weights.shape[1]}"
                )
        if self.shift == "split":
            for i, layer in enumerate(self.layers):
                if layer.shift.size != 3:
                    raise ValueError(f"layer {i}: split shift needs 3 coefficients")

    @property
    def is_odd(self):
        return self.activation in ODD_ACTIVATIONS

    def parameters(self):
        """Flat list of parameter arrays (weights then shift, per layer)."""
        out = []
        for layer in self.layers:
            out.extend([layer.weights, layer.shift])
        return out

    def copy(self):
        return copy.deepcopy(self)


def boundaries(X: SimplicialComplex, order):
    """``(B_k, B_{k+1})`` as dense float arrays; ``B_0`` is an empty-row matrix."""
    if order < 0 or order > X.max_order:
        raise ValueError(f"order {order} not present in complex")
    n = X.count(order)
    lo = boundary_matrix(X, order).toarray().astype(float) if order >= 1 else np.zeros((0, n))
    hi = boundary_matrix(X, order + 1).toarray().astype(float)
    return lo, hi


def shift_matrices(kind, lo, hi, n_terms):
    """Fixed matrices the shift coefficients multiply."""
    L_lo = lo.T @ lo
    L_up = hi @ hi.T
    n = L_lo.shape[0]
    if kind == "split":
        return [np.eye(n), L_lo, L_up]
    L = L_lo + L_up
    mats = [np.eye(n)]
    for _ in range(n_terms - 1):
        mats.append(mats[-1] @ L)
    return mats


def build_model(X: SimplicialComplex, order, dims, activation="tanh", shift="hodge", degree=1, seed=0) -> SNNModel:
    """Randomly initialised model with layer widths ``dims``.

    Weights are uniform in ``[-1/sqrt(fan_in), 1/sqrt(fan_in)]`` from a
    seeded PCG64 generator. Shift coefficients start at ``I - mu L`` with
    ``mu = 1/lambda_max(L_k)`` (for ``split``, the same mu on both parts).
    """
    if len(dims) < 2:
        raise ValueError("dims needs at least input and output width")
    lo, hi = boundaries(X, order)
    lam_max = float(eig_sym(lo.T @ lo + hi @ hi.T).eigenvalues[-1]) if X.count(order) else 0.0
    mu = 1.0 / lam_max if lam_max > 0 else 0.0
    if shift == "split":
        coeffs = np.array([1.0, -mu, -mu])
    else:
        coeffs = np.zeros(degree + 1)
        coeffs[0] = 1.0
        if degree >= 1:
            coeffs[1] = -mu
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    layers = []
    for fin, fout in zip(dims, dims[1:]):
        bound = 1.0 / np.sqrt(fin)
        layers.append(LayerParams(rng.uniform(-bound, bound, size=(fin, fout)), coeffs.copy()))
    return SNNModel(order, layers, activation, shift)


def _run(model: SNNModel, lo, hi, Y0, keep=False):
    Y = np.atleast_2d(np.asarray(Y0, dtype=float))
    if Y.shape[0] != lo.shape[1] or Y.shape[0] != hi.shape[0]:
        raise ValueError(f"features have {Y.shape[0]} rows, complex has {hi.shape[0]} order-{model.order} simplices")
    cache = []
    mats_by_len = {}
    for i, layer in enumerate(model.layers):
        if Y.shape[1] != layer.weights.shape[0]:
            raise ValueError(f"layer {i} expects {layer.weights.shape[0]} input features, got {Y.shape[1]}")
        n_terms = layer.shift.size
        if n_terms not in mats_by_len:
            mats_by_len[n_terms] = shift_matrices(model.shift, lo, hi, n_terms)
        mats = mats_by_len[n_terms]
        H = sum(c * P for c, P in zip(layer.shift, mats))
        HY = H @ Y
        Z = HY @ layer.weights
        A = _act(model.activation, Z)
        if keep:
            cache.append((Y, H, HY, Z, mats))
        Y = A
    return (Y, cache) if keep else Y


def forward(model: SNNModel, X: SimplicialComplex, Y0):
    """Apply every layer: shift filter, feature mix, elementwise activation."""
    lo, hi = boundaries(X, model.order)
    return _run(model, lo, hi, Y0)


def forward_with_boundaries(model: SNNModel, lo, hi, Y0):
    """Forward pass with explicit ``(B_k, B_{k+1})``, e.g. re-oriented ones."""
    return _run(model, np.asarray(lo, dtype=float), np.asarray(hi, dtype=float), Y0)


def orientation_flip(X: SimplicialComplex, flip_set, order=1):
    """Re-orient the order-k simplices in ``flip_set`` (canonical indices).

    Returns ``(D, B_k D, D B_{k+1})`` with ``D`` diagonal, -1 on flipped
    simplices.
    """
    n = X.count(order)
    flips = np.asarray(sorted(set(int(i) for i in flip_set)), dtype=np.int64)
    if flips.size and (flips.min() < 0 or flips.max() >= n):
        raise ValueError(f"flip index out of range [0, {n})")
    d = np.ones(n)
    d[flips] = -1.0
    lo, hi = boundaries(X, order)
    return np.diag(d), lo * d[None, :], d[:, None] * hi


@dataclass(frozen=True)
class EquivarianceReport:
    max_deviation: float
    activation: str
    odd: bool

    @property
    def equivariant(self):
        return self.max_deviation <= 1e-10


def check_equivariance(model: SNNModel, X: SimplicialComplex, Y0, flip_set) -> EquivarianceReport:
    """Compare ``forward'(D Y0)`` on the re-oriented complex against ``D forward(Y0)``."""
    D, lo_f, hi_f = orientation_flip(X, flip_set, model.order)
    Y0 = np.atleast_2d(np.asarray(Y0, dtype=float))
    base = forward(model, X, Y0)
    flipped = forward_with_boundaries(model, lo_f, hi_f, D @ Y0)
    dev = float(np.max(np.abs(flipped - D @ base))) if base.size else 0.0
    return EquivarianceReport(dev, model.activation, model.is_odd)


def recurrent_forward(model: SNNModel, X: SimplicialComplex, Y0, max_iter=1000, tol=1e-8):
    """Weight-tied iteration of the first layer until a fixed point.

    Returns ``(Y, iterations)``. Raises RuntimeError on divergence or when
    ``max_iter`` is reached without ``max|Y_new - Y| <= tol``.
    """
    layer = model.layers[0]
    if layer.weights.shape[0] != layer.weights.shape[1]:
        raise ValueError("recurrent iteration needs a square weight matrix")
    tied = SNNModel(model.order, [layer], model.activation, model.shift)
    lo, hi = boundaries(X, model.order)
    Y = np.atleast_2d(np.asarray(Y0, dtype=float))
    for it in range(1, max_iter + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            Y_new = _run(tied, lo, hi, Y)
        if not np.all(np.isfinite(Y_new)):
            raise RuntimeError(f"recurrent iteration diverged at step {it}")
        if np.max(np.abs(Y_new - Y)) <= tol:
            return Y_new, it
        Y = Y_new
    raise RuntimeError(f"recurrent iteration did not reach tolerance {tol:g} in {max_iter} steps")


# -- training -----------------------------------------------------------------


def _dataset(dataset):
    pairs = [(np.atleast_2d(np.asarray(a, dtype=float)), np.atleast_2d(np.asarray(b, dtype=float))) for a, b in dataset]
    if not pairs:
        raise ValueError("dataset is empty")
    return pairs


def mse_loss(model: SNNModel, X: SimplicialComplex, dataset):
    """Mean squared error over every output entry of every pair."""
    lo, hi = boundaries(X, model.order)
    pairs = _dataset(dataset)
    total = 0.0
    count = 0
    for Y0, T in pairs:
        out = _run(model, lo, hi, Y0)
        if out.shape != T.shape:
            raise ValueError(f"target shape {T.shape} does not match output shape {out.shape}")
        total += float(np.sum((out - T) ** 2))
        count += T.size
    return total / count


def gradients(model: SNNModel, X: SimplicialComplex, dataset):
    """Loss and its gradient for every parameter array, in ``model.parameters()`` order."""
    lo, hi = boundaries(X, model.order)
    pairs = _dataset(dataset)
    count = sum(T.size for _, T in pairs)
    grads = [np.zeros_like(p) for p in model.parameters()]
    total = 0.0
    for Y0, T in pairs:
        out, cache = _run(model, lo, hi, Y0, keep=True)
        if out.shape != T.shape:
            raise ValueError(f"target shape {T.shape} does not match output shape {out.shape}")
        diff = out - T
        total += float(np.sum(diff**2))
        dA = 2.0 * diff / count
        for i in reversed(range(len(model.layers))):
            Y, H, HY, Z, mats = cache[i]
            W = model.layers[i].weights
            dZ = dA * _act_grad(model.activation, Z)
            grads[2 * i] += HY.T @ dZ
            dZW = dZ @ W.T
            # H is symmetric: d/dH <dZ, H Y W> = dZ W^T Y^T
            grads[2 * i + 1] += np.array([np.sum(dZW * (P @ Y)) for P in mats])
            dA = H @ dZW
    return total / count, grads


def train(model: SNNModel, X: SimplicialComplex, dataset, lr=0.1, epochs=100, halve_on_increase=True):
    """Full-batch gradient descent on the MSE.

    Returns ``(trained_copy, loss_curve)`` where ``loss_curve[e]`` is the loss
    after epoch ``e``. With ``halve_on_increase``, a step that would raise
    the loss (or make it non-finite) is rejected and the learning rate
    halved, up to 60 times per epoch; the model stays put if no step helps.
    A non-finite loss otherwise raises FloatingPointError.
    """
    if lr < 0:
        raise ValueError("learning rate must be non-negative")
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    model = model.copy()
    curve = []
    loss, grads = gradients(model, X, dataset)
    if not np.isfinite(loss):
        raise FloatingPointError("initial loss is not finite")
    for _ in range(int(epochs)):
        step = lr
        for _attempt in range(61):
            trial = model.copy()
            for p, g in zip(trial.parameters(), grads):
                p -= step * g
            new_loss = mse_loss(trial, X, dataset)
            if not halve_on_increase or (np.isfinite(new_loss) and new_loss <= loss):
                break
            step *= 0.5
        else:
            trial, new_loss = model, loss
        if not np.isfinite(new_loss):
            raise FloatingPointError("training diverged: loss is not finite")
        model = trial
        loss, grads = gradients(model, X, dataset)
        curve.append(loss)
    return model, np.array(curve)
