"""Scikit-learn style wrappers around the functional core.

Every class follows the estimator protocol (get_params/set_params, fit
returning self, transform/predict), so the steps compose with
sklearn.pipeline and clone(). X is a single 2-D grayscale image or a 3-D
stack of equally-sized images; the output matches the input arity.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .bpnn import TrainConfig, build_training_set, init_mlp, predict_upscale, train
from .bpnn import N_INPUTS, N_OUTPUTS, TrainingSet
from .nlmeans import KernelParams, WindowConfig, denoise, despeckle
from .resample import bicubic_upscale_2x, downsample_2x
from .speckle import SpeckleParams, add_speckle
from .sr import sr_despeckle_upscale, sr_upscale_2x
from .validation import check_image


def _apply(X, fn):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 2:
        return fn(check_image(X))
    if X.ndim == 3:
        return np.stack([fn(check_image(img)) for img in X])
    raise ValueError(f"X must be a 2-D image or 3-D image stack, got ndim={X.ndim}")


def _iter_images(X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 2:
        return [check_image(X)]
    if X.ndim == 3:
        return [check_image(img) for img in X]
    raise ValueError(f"X must be a 2-D image or 3-D image stack, got ndim={X.ndim}")


class SpeckleNoiser(TransformerMixin, BaseEstimator):
    """Adds seeded multiplicative speckle noise J = I*(1+n)."""

    def __init__(self, sigma=0.2, seed=0, distribution="uniform"):
        self.sigma = sigma
        self.seed = seed
        self.distribution = distribution

    def fit(self, X, y=None):
        _iter_images(X)
        return self

    def transform(self, X):
        params = SpeckleParams(self.sigma, self.seed, self.distribution)
        return _apply(X, lambda img: add_speckle(img, params))


class NlmDenoiser(TransformerMixin, BaseEstimator):
    """NL-means despeckler (log-domain by default).

    Parameters mirror the functional core: window radii, boundary policy,
    kernel selection (exp/cosine/combined) with its smoothing constants, the
    classic self-weight cap, and the log-offset epsilon. log_domain=False
    denoises in the intensity domain (plain NL-means for additive noise).
    """

    def __init__(
        self,
        patch_radius=2,
        search_radius=8,
        kernel="combined",
        h=0.35,
        h1=0.35,
        h2=6.0,
        boundary="reflect",
        cap_self_weight=False,
        log_domain=True,
        epsilon=1e-4,
    ):
        self.patch_radius = patch_radius
        self.search_radius = search_radius
        self.kernel = kernel
        self.h = h
        self.h1 = h1
        self.h2 = h2
        self.boundary = boundary
        self.cap_self_weight = cap_self_weight
        self.log_domain = log_domain
        self.epsilon = epsilon

    def _configs(self):
        return (
            WindowConfig(self.patch_radius, self.search_radius, self.boundary),
            KernelParams(self.kernel, self.h, self.h1, self.h2),
        )

    def fit(self, X, y=None):
        _iter_images(X)
        return self

    def transform(self, X):
        cfg, params = self._configs()
        if self.log_domain:
            return _apply(
                X, lambda img: despeckle(img, cfg, params, self.epsilon, self.cap_self_weight)
            )
        return _apply(X, lambda img: denoise(img, cfg, params, self.cap_self_weight))


class BicubicUpscaler(TransformerMixin, BaseEstimator):
    """Catmull-Rom 2x upscaler, the non-learning baseline."""

    def __init__(self, boundary="reflect"):
        self.boundary = boundary

    def fit(self, X, y=None):
        _iter_images(X)
        return self

    def transform(self, X):
        return _apply(X, lambda img: bicubic_upscale_2x(img, self.boundary))


class NlmUpscaler(TransformerMixin, BaseEstimator):
    """Cross-scale NL-means 2x super-resolver; log_domain folds despeckling
    into the same pass."""

    def __init__(
        self,
        patch_radius=2,
        search_radius=8,
        kernel="combined",
        h=0.35,
        h1=0.35,
        h2=6.0,
        boundary="reflect",
        cross_scale_patches=False,
        log_domain=True,
        epsilon=1e-4,
        downsample_mode="mean",
    ):
        self.patch_radius = patch_radius
        self.search_radius = search_radius
        self.kernel = kernel
        self.h = h
        self.h1 = h1
        self.h2 = h2
        self.boundary = boundary
        self.cross_scale_patches = cross_scale_patches
        self.log_domain = log_domain
        self.epsilon = epsilon
        self.downsample_mode = downsample_mode

    def _configs(self):
        return (
            WindowConfig(self.patch_radius, self.search_radius, self.boundary),
            KernelParams(self.kernel, self.h, self.h1, self.h2),
        )

    def fit(self, X, y=None):
        _iter_images(X)
        return self

    def transform(self, X):
        cfg, params = self._configs()
        if self.log_domain:
            return _apply(
                X,
                lambda img: sr_despeckle_upscale(
                    img, cfg, params, self.epsilon, self.cross_scale_patches, self.downsample_mode
                ),
            )
        return _apply(
            X,
            lambda img: sr_upscale_2x(
                img, cfg, params, self.cross_scale_patches, self.downsample_mode
            ),
        )


class BpnnUpscaler(TransformerMixin, BaseEstimator):
    """Self-trained 2x super-resolver: fit() builds cross-scale training pairs
    from the input images themselves and trains the small backprop net;
    predict()/transform() upscales.

    use_nlm_features=True feeds the net NL-means child-quad predictions (the
    combined method); False replaces them with nearest-neighbor quads (the
    BP-network-only ablation).

    Attributes
    ----------
    mlp_ : trained network
    loss_trace_ : per-epoch mean squared error
    n_samples_ : training rows used
    """

    def __init__(
        self,
        patch_radius=2,
        search_radius=8,
        kernel="combined",
        h=0.35,
        h1=0.35,
        h2=6.0,
        boundary="reflect",
        use_nlm_features=True,
        hidden_size=12,
        learning_rate=0.05,
        epochs=40,
        seed=0,
        shuffle=True,
        epsilon=1e-4,
        downsample_mode="mean",
    ):
        self.patch_radius = patch_radius
        self.search_radius = search_radius
        self.kernel = kernel
        self.h = h
        self.h1 = h1
        self.h2 = h2
        self.boundary = boundary
        self.use_nlm_features = use_nlm_features
        self.hidden_size = hidden_size
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.seed = seed
        self.shuffle = shuffle
        self.epsilon = epsilon
        self.downsample_mode = downsample_mode

    def _configs(self):
        return (
            WindowConfig(self.patch_radius, self.search_radius, self.boundary),
            KernelParams(self.kernel, self.h, self.h1, self.h2),
            TrainConfig(self.learning_rate, self.epochs, self.seed, self.shuffle, self.hidden_size),
            "nlm" if self.use_nlm_features else "nearest",
        )

    def fit(self, X, y=None):
        cfg, params, tcfg, mode = self._configs()
        sets = [
            build_training_set(img, cfg, params, self.epsilon, mode, self.downsample_mode)
            for img in _iter_images(X)
        ]
        data = TrainingSet(
            np.concatenate([s.features for s in sets]),
            np.concatenate([s.targets for s in sets]),
        )
        net = init_mlp((N_INPUTS, self.hidden_size, N_OUTPUTS), seed=self.seed)
        self.mlp_, self.loss_trace_ = train(net, data, tcfg)
        self.n_samples_ = len(data)
        return self

    def predict(self, X):
        check_is_fitted(self, "mlp_")
        cfg, params, _, mode = self._configs()
        return _apply(
            X,
            lambda img: predict_upscale(
                self.mlp_, img, cfg, params, self.epsilon, mode, self.downsample_mode
            ),
        )

    def transform(self, X):
        return self.predict(X)
