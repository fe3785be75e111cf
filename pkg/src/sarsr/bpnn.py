"""Backpropagation MLP trained on self-similar coarse/fine pairs.

The network maps 5 inputs (one coarse pixel plus the four child-quad pixels
predicted for it) to 4 outputs (the child quad at the finer scale). Training
pairs come from the image itself: shrink it one octave, predict the original
back from the shrunk copy, and regress those predictions onto the despeckled
original. Applying the trained net one octave up yields the final result.

Hidden layers use the logistic sigmoid; the output layer is identity (outputs
are clamped to [0,1] only when an image is assembled). Training is plain
per-sample SGD on the mean squared error over the 4 outputs.
"""

from dataclasses import dataclass, field

import numpy as np

from .nlmeans import despeckle
from .resample import downsample_2x, nearest_upscale_2x
from .speckle import DEFAULT_EPSILON
from .sr import child_coords, sr_despeckle_upscale
from .validation import check_image

N_INPUTS = 5
N_OUTPUTS = 4

FEATURE_MODES = ("nlm", "nearest")


class TrainingDivergedError(RuntimeError):
    """Raised when the loss becomes non-finite (learning rate too high)."""


@dataclass
class Mlp:
    """Layer sizes plus per-layer weight matrices (n_out, n_in) and bias vectors."""

    layer_sizes: tuple
    weights: list = field(repr=False)
    biases: list = field(repr=False)

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.layer_sizes)
        if len(sizes) < 2 or sizes[0] != N_INPUTS or sizes[-1] != N_OUTPUTS:
            raise ValueError(
                f"layer_sizes must run from {N_INPUTS} inputs to {N_OUTPUTS} outputs, got {sizes}"
            )
        self.layer_sizes = sizes
        for l, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (sizes[l + 1], sizes[l]) or b.shape != (sizes[l + 1],):
                raise ValueError(f"layer {l} parameter shapes inconsistent with {sizes}")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise ValueError(f"layer {l} has non-finite parameters")

    def copy(self):
        return Mlp(
            self.layer_sizes,
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
        )


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.05
    epochs: int = 40
    seed: int = 0
    shuffle: bool = True
    hidden_size: int = 12

    def __post_init__(self):
        # zero is allowed (a no-op step, useful for identity checks); negative is not
        if self.learning_rate < 0.0:
            raise ValueError(f"learning_rate must be >= 0, got {self.learning_rate}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.hidden_size < 1:
            raise ValueError(f"hidden_size must be >= 1, got {self.hidden_size}")


@dataclass(frozen=True)
class TrainingSet:
    """Rows of (5 features, 4 targets), both in [0, 1]."""

    features: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        if self.features.ndim != 2 or self.features.shape[1] != N_INPUTS:
            raise ValueError(f"features must be (n, {N_INPUTS}), got {self.features.shape}")
        if self.targets.shape != (self.features.shape[0], N_OUTPUTS):
            raise ValueError(
                f"targets must be ({self.features.shape[0]}, {N_OUTPUTS}), got {self.targets.shape}"
            )

    def __len__(self):
        return self.features.shape[0]


def init_mlp(layer_sizes=(5, 12, 4), seed=0):
    """Seeded uniform init in +-1/sqrt(fan_in); biases start at zero."""
    rng = np.random.default_rng(seed)
    weights = []
    biases = []
    for n_in, n_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        bound = 1.0 / np.sqrt(n_in)
        weights.append(rng.uniform(-bound, bound, size=(n_out, n_in)))
        biases.append(np.zeros(n_out))
    return Mlp(tuple(layer_sizes), weights, biases)


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def forward(net, features):
    """Evaluate the network. Accepts a single 5-vector or an (n, 5) batch."""
    x = np.asarray(features, dtype=np.float64)
    single = x.ndim == 1
    a = x.reshape(1, -1) if single else x
    last = len(net.weights) - 1
    for l, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = a @ w.T + b
        a = z if l == last else _sigmoid(z)
    return a[0] if single else a


def _forward_trace(net, x):
    """Activations per layer (input first), for backprop."""
    acts = [x]
    last = len(net.weights) - 1
    a = x
    for l, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = w @ a + b
        a = z if l == last else _sigmoid(z)
        acts.append(a)
    return acts


def _sample_loss(output, target):
    diff = output - target
    return float(np.mean(diff * diff))


def _backprop(net, x, target):
    """Gradients of the per-sample loss mean((out - target)^2) and the loss."""
    acts = _forward_trace(net, x)
    out = acts[-1]
    loss = _sample_loss(out, target)
    # identity output: dL/dz = 2/4 (out - t)
    delta = (2.0 / N_OUTPUTS) * (out - target)
    grads_w = [None] * len(net.weights)
    grads_b = [None] * len(net.biases)
    for l in range(len(net.weights) - 1, -1, -1):
        grads_w[l] = np.outer(delta, acts[l])
        grads_b[l] = delta
        if l > 0:
            a_prev = acts[l]
            delta = (net.weights[l].T @ delta) * a_prev * (1.0 - a_prev)
    return grads_w, grads_b, loss


def train(net, data, cfg):
    """Per-sample SGD; returns (trained copy, per-epoch mean loss trace).

    Sample order is reshuffled each epoch from a generator seeded with
    cfg.seed, so identical configs reproduce bit-identical parameters.
    """
    if len(data) == 0:
        raise ValueError("training set is empty")
    net = net.copy()
    rng = np.random.default_rng(cfg.seed)
    order = np.arange(len(data))
    trace = []
    # overflow on a diverging run is expected; it is caught via the loss check
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(cfg.epochs):
            if cfg.shuffle:
                order = rng.permutation(len(data))
            total = 0.0
            for idx in order:
                grads_w, grads_b, loss = _backprop(net, data.features[idx], data.targets[idx])
                total += loss
                for l in range(len(net.weights)):
                    net.weights[l] -= cfg.learning_rate * grads_w[l]
                    net.biases[l] -= cfg.learning_rate * grads_b[l]
            mean_loss = total / len(data)
            if not np.isfinite(mean_loss):
                raise TrainingDivergedError(
                    f"mean loss became non-finite ({mean_loss}); lower the learning rate"
                )
            trace.append(mean_loss)
    return net, np.array(trace)


def gradient_check(net, row, step=1e-5):
    """Max relative error between analytic and central-difference gradients.

    Central differences with the given step on every parameter; relative error
    is |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
    """
    x, target = row
    x = np.asarray(x, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    grads_w, grads_b, _ = _backprop(net, x, target)
    worst = 0.0
    for grads, params in ((grads_w, net.weights), (grads_b, net.biases)):
        for g, p in zip(grads, params):
            flat_p = p.ravel()
            flat_g = g.ravel()
            for k in range(flat_p.size):
                orig = flat_p[k]
                flat_p[k] = orig + step
                hi = _sample_loss(forward(net, x), target)
                flat_p[k] = orig - step
                lo = _sample_loss(forward(net, x), target)
                flat_p[k] = orig
                numeric = (hi - lo) / (2.0 * step)
                analytic = flat_g[k]
                err = abs(analytic - numeric) / max(1e-8, abs(analytic) + abs(numeric))
                if err > worst:
                    worst = err
    return worst


def _predicted_fine(img, cfg, params, epsilon, feature_mode, downsample_mode):
    if feature_mode == "nlm":
        return sr_despeckle_upscale(img, cfg, params, epsilon, downsample_mode=downsample_mode)
    if feature_mode == "nearest":
        return nearest_upscale_2x(img)
    raise ValueError(f"feature_mode must be one of {FEATURE_MODES}, got {feature_mode!r}")


def _assemble_rows(coarse, fine):
    """Row per coarse pixel: [coarse(x), fine at child quad of x], clamped to [0,1]."""
    h, w = coarse.shape
    quads = fine.reshape(h, 2, w, 2).transpose(0, 2, 1, 3).reshape(h * w, 4)
    rows = np.empty((h * w, N_INPUTS))
    rows[:, 0] = coarse.ravel()
    rows[:, 1:] = quads
    return np.clip(rows, 0.0, 1.0)


def build_training_set(
    noisy,
    cfg,
    params,
    epsilon=DEFAULT_EPSILON,
    feature_mode="nlm",
    downsample_mode="mean",
):
    """Self-similar supervision: shrink the image one octave, predict it back,
    and pair those predictions with the despeckled original as targets."""
    noisy = check_image(noisy)
    low = downsample_2x(noisy, downsample_mode)
    pred = _predicted_fine(low, cfg, params, epsilon, feature_mode, downsample_mode)
    ref = despeckle(noisy, cfg, params, epsilon)
    features = _assemble_rows(low, pred)
    targets = _assemble_rows(low, ref)[:, 1:]
    return TrainingSet(features, targets)


def predict_upscale(
    net,
    img,
    cfg,
    params,
    epsilon=DEFAULT_EPSILON,
    feature_mode="nlm",
    downsample_mode="mean",
):
    """Apply the trained net one octave up: features are built from the input
    exactly as during training, and the 4 outputs of each parent pixel fill
    its child quad, clamped to [0, 1]."""
    img = check_image(img)
    pred = _predicted_fine(img, cfg, params, epsilon, feature_mode, downsample_mode)
    features = _assemble_rows(img, pred)
    quads = np.clip(forward(net, features), 0.0, 1.0)
    h, w = img.shape
    return quads.reshape(h, w, 2, 2).transpose(0, 2, 1, 3).reshape(2 * h, 2 * w)


def combined_sr(
    noisy,
    cfg,
    params,
    epsilon=DEFAULT_EPSILON,
    tcfg=TrainConfig(),
    feature_mode="nlm",
    downsample_mode="mean",
):
    """Train on the image's own cross-scale pairs, then upscale it.

    feature_mode "nlm" is the headline method (NL-means predictions feed the
    net); "nearest" removes them, leaving the BP-network-only ablation.
    Weight init and epoch shuffling both derive from tcfg.seed.
    """
    data = build_training_set(noisy, cfg, params, epsilon, feature_mode, downsample_mode)
    net = init_mlp((N_INPUTS, tcfg.hidden_size, N_OUTPUTS), seed=tcfg.seed)
    net, _ = train(net, data, tcfg)
    return predict_upscale(net, noisy, cfg, params, epsilon, feature_mode, downsample_mode)


def save_mlp(net, path):
    """Plain-text model format: a header line with the layer sizes, then one
    block per layer holding the weight rows and a bias line, blank-line
    separated. Floats use 17 significant digits and round-trip bit-exactly."""
    lines = [" ".join(str(s) for s in net.layer_sizes)]
    for w, b in zip(net.weights, net.biases):
        lines.append("")
        for row in w:
            lines.append(" ".join(f"{v:.17g}" for v in row))
        lines.append(" ".join(f"{v:.17g}" for v in b))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_mlp(path):
    with open(path, "r", encoding="ascii") as fh:
        blocks = fh.read().split("\n\n")
    sizes = tuple(int(tok) for tok in blocks[0].split())
    if len(blocks) != len(sizes):
        raise ValueError(
            f"model file has {len(blocks) - 1} layer blocks, expected {len(sizes) - 1}"
        )
    weights = []
    biases = []
    for l, block in enumerate(blocks[1:]):
        rows = [np.array([float(t) for t in line.split()]) for line in block.strip().splitlines()]
        if len(rows) != sizes[l + 1] + 1:
            raise ValueError(f"layer {l} block has {len(rows)} lines, expected {sizes[l + 1] + 1}")
        weights.append(np.vstack(rows[:-1]))
        biases.append(rows[-1])
    return Mlp(sizes, weights, biases)
