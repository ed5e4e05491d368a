"""Forward-pass image transformer with two token mixers: a parameter-free
two-axis Fourier mixer and a softmax self-attention baseline.

The pipeline: non-overlapping patches are flattened (channel-major) and
linearly projected, a CLS token is prepended, positional embeddings added,
LayerNorm applied; each block then mixes tokens, normalizes the residual,
applies a GELU feed-forward, and normalizes again; the CLS row is projected
to logits with a GELU after the projection.

Block wiring, kept exactly as designed (the second residual reuses the mixer
output rather than the first norm's output — do not "correct" it to the
standard transformer residual):

    mixed = mixer(x)
    x1    = layer_norm1(mixed + x)
    h     = dense(gelu(ff(x1)))        # dropout is identity at inference
    out   = layer_norm2(h + mixed)

Every linear layer stores its weight as [out_features, in_features] and
applies x @ W.T + b.  All ops are pure functions over immutable weights;
forward passes are safe to run concurrently.  Forward-only: no autodiff.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import erf

from .errors import ConfigError, InvalidShapeError
from .tensor import Rng, randn, read_tensor, write_tensor

MIXERS = ("fourier", "attention")


@dataclass(frozen=True)
class FitConfig:
    img_size: tuple[int, int] = (32, 32)
    patch_size: tuple[int, int] = (4, 4)
    in_chans: int = 3
    embed_dim: int = 64
    dim_feedforward: int = 128
    depth: int = 2
    num_classes: int = 10
    num_heads: int = 4
    dropout_rate: float = 0.0
    mixer: str = "fourier"

    def __post_init__(self):
        h, w = self.img_size
        ph, pw = self.patch_size
        positive = {
            "img_size": min(h, w),
            "patch_size": min(ph, pw),
            "in_chans": self.in_chans,
            "embed_dim": self.embed_dim,
            "dim_feedforward": self.dim_feedforward,
            "num_classes": self.num_classes,
            "num_heads": self.num_heads,
        }
        for name, value in positive.items():
            if value < 1:
                raise ConfigError(f"{name} must be positive, got {value}")
        if self.depth < 0:
            raise ConfigError(f"depth must be >= 0, got {self.depth}")
        if h % ph or w % pw:
            raise ConfigError(
                f"patch size {self.patch_size} must divide image size {self.img_size}"
            )
        if self.mixer not in MIXERS:
            raise ConfigError(f"mixer must be one of {MIXERS}, got {self.mixer!r}")
        if self.mixer == "attention" and self.embed_dim % self.num_heads:
            raise ConfigError(
                f"embed_dim {self.embed_dim} not divisible by num_heads {self.num_heads}"
            )
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")

    @property
    def grid_size(self) -> tuple[int, int]:
        return self.img_size[0] // self.patch_size[0], self.img_size[1] // self.patch_size[1]

    @property
    def num_patches(self) -> int:
        gh, gw = self.grid_size
        return gh * gw

    @property
    def patch_dim(self) -> int:
        return self.in_chans * self.patch_size[0] * self.patch_size[1]

    @property
    def seq_len(self) -> int:
        return self.num_patches + 1


@dataclass
class BlockWeights:
    gamma1: np.ndarray = None
    beta1: np.ndarray = None
    w_ff: np.ndarray = None
    b_ff: np.ndarray = None
    w_dense: np.ndarray = None
    b_dense: np.ndarray = None
    gamma2: np.ndarray = None
    beta2: np.ndarray = None
    # attention mixer only
    w_q: np.ndarray = None
    b_q: np.ndarray = None
    w_k: np.ndarray = None
    b_k: np.ndarray = None
    w_v: np.ndarray = None
    b_v: np.ndarray = None
    w_o: np.ndarray = None
    b_o: np.ndarray = None


@dataclass
class FitModel:
    config: FitConfig
    patch_proj_weight: np.ndarray  # [d, C*Ph*Pw]
    patch_proj_bias: np.ndarray  # [d]
    cls_token: np.ndarray  # [1, d]
    pos_embed: np.ndarray  # [num_patches+1, d]
    blocks: list[BlockWeights] = field(default_factory=list)
    head_weight: np.ndarray = None  # [num_classes, d]
    head_bias: np.ndarray = None  # [num_classes]


def gelu(x) -> np.ndarray:
    """Exact-erf GELU: x * Phi(x) (no tanh approximation)."""
    x = np.asarray(x)
    return 0.5 * x * (1.0 + erf(x / np.sqrt(2.0)))


def softmax(z, axis: int = -1) -> np.ndarray:
    z = np.asarray(z)
    shifted = z - z.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=axis, keepdims=True)


def layer_norm(x, gamma, beta, eps: float = 1e-12) -> np.ndarray:
    """Normalize over the last axis with population (1/d) variance."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    x = np.asarray(x)
    mean = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    return (x - mean) / np.sqrt(var + eps) * np.asarray(gamma) + np.asarray(beta)


def patch_embed(image, model: FitModel) -> np.ndarray:
    """[C, H, W] image -> [num_patches+1, d] token sequence.

    Projects channel-major-flattened Ph x Pw patches, prepends the CLS
    token, adds positional embeddings, then applies LayerNorm.  The final
    norm has no learnable scale/shift (gamma = 1, beta = 0); the learnable
    parameters are exactly the fields on FitModel.
    """
    cfg = model.config
    img = np.asarray(image)
    expected = (cfg.in_chans, *cfg.img_size)
    if img.shape != expected:
        raise InvalidShapeError(f"image shape {img.shape} != configured {expected}")
    gh, gw = cfg.grid_size
    ph, pw = cfg.patch_size
    patches = (
        img.reshape(cfg.in_chans, gh, ph, gw, pw)
        .transpose(1, 3, 0, 2, 4)
        .reshape(cfg.num_patches, cfg.patch_dim)
    )
    tokens = patches @ model.patch_proj_weight.T + model.patch_proj_bias
    seq = np.concatenate([model.cls_token, tokens], axis=0) + model.pos_embed
    d = cfg.embed_dim
    return layer_norm(seq, np.ones(d), np.zeros(d))


def fourier_mixing(x) -> np.ndarray:
    """Re(F_seq(F_hidden(x))): complex FFT along the hidden axis, then the
    sequence axis, real part kept.  Zero learnable parameters.

    The two transforms commute, so the axis order is immaterial (tested).
    """
    x = np.asarray(x)
    if x.ndim != 2:
        raise InvalidShapeError(f"expected [S, d] input, got rank {x.ndim}")
    return np.fft.fft(np.fft.fft(x, axis=-1), axis=-2).real


def attention_mixing(x, block: BlockWeights, num_heads: int, return_weights: bool = False):
    """Multi-head self-attention: softmax(Q K^T / sqrt(d_k)) V, concat, W_O."""
    x = np.asarray(x)
    s, d = x.shape
    if d % num_heads:
        raise ConfigError(f"embed_dim {d} not divisible by num_heads {num_heads}")
    dk = d // num_heads

    def heads(m):
        return m.reshape(s, num_heads, dk).transpose(1, 0, 2)  # [heads, S, dk]

    q = heads(x @ block.w_q.T + block.b_q)
    k = heads(x @ block.w_k.T + block.b_k)
    v = heads(x @ block.w_v.T + block.b_v)
    weights = softmax(q @ k.transpose(0, 2, 1) / np.sqrt(dk), axis=-1)
    ctx = (weights @ v).transpose(1, 0, 2).reshape(s, d)
    out = ctx @ block.w_o.T + block.b_o
    return (out, weights) if return_weights else out


def feed_forward(x, block: BlockWeights) -> np.ndarray:
    """dense(gelu(ff(x))): d -> dim_feedforward -> d with exact-erf GELU."""
    hidden = gelu(np.asarray(x) @ block.w_ff.T + block.b_ff)
    return hidden @ block.w_dense.T + block.b_dense


def fit_block(x, block: BlockWeights, mixer: str = "fourier", num_heads: int = 1) -> np.ndarray:
    """One transformer block; see the module docstring for the exact wiring."""
    if mixer not in MIXERS:
        raise ConfigError(f"mixer must be one of {MIXERS}, got {mixer!r}")
    mixed = fourier_mixing(x) if mixer == "fourier" else attention_mixing(x, block, num_heads)
    x1 = layer_norm(mixed + x, block.gamma1, block.beta1)
    h = feed_forward(x1, block)
    # second residual adds the mixer output itself (reference wiring)
    return layer_norm(h + mixed, block.gamma2, block.beta2)


def fit_forward(image, model: FitModel) -> np.ndarray:
    """Full forward pass: logits[num_classes] = gelu(W_head . cls + b_head)."""
    cfg = model.config
    x = patch_embed(image, model)
    for block in model.blocks:
        x = fit_block(x, block, cfg.mixer, cfg.num_heads)
    cls = x[0]
    return gelu(cls @ model.head_weight.T + model.head_bias)


def cross_entropy(logits, label: int) -> float:
    """-log softmax(logits)[label], stabilized by max subtraction."""
    z = np.asarray(logits, dtype=np.float64)
    if z.ndim != 1:
        raise InvalidShapeError(f"logits must be rank-1, got rank {z.ndim}")
    if not 0 <= label < z.shape[0]:
        raise ValueError(f"label {label} out of range for {z.shape[0]} classes")
    shifted = z - z.max()
    return float(np.log(np.exp(shifted).sum()) - shifted[label])


def count_params(config: FitConfig) -> int:
    """Exact learnable-scalar count for the configured model.

    Per block: two norms (2d each), ff d->dff and dense dff->d with biases,
    plus 4(d^2 + d) for the Q/K/V/O projections when the mixer is attention
    (the fourier mixer contributes zero).  The embedding norm has no
    learnable parameters.
    """
    d = config.embed_dim
    dff = config.dim_feedforward
    total = d * config.patch_dim + d  # patch projection
    total += d  # cls token
    total += config.seq_len * d  # positional table
    block = 2 * (2 * d) + d * dff + dff + dff * d + d
    if config.mixer == "attention":
        block += 4 * (d * d + d)
    total += config.depth * block
    total += config.num_classes * d + config.num_classes  # head
    return total


def init_fit_model(config: FitConfig, rng: Rng) -> FitModel:
    """Seeded demo initialization.

    Weights are standard-normal scaled by 1/sqrt(fan_in); biases and the
    positional table start at zero; the CLS token is unit-scale normal;
    norm scales/shifts start at 1/0.  Draw order (for stream reproduction):
    patch_proj_weight, cls_token, then per block [w_ff, w_dense, and for
    attention w_q, w_k, w_v, w_o], then head_weight.
    """
    d = config.embed_dim
    dff = config.dim_feedforward

    def scaled(shape, fan_in):
        return randn(rng, shape) / np.sqrt(fan_in)

    model = FitModel(
        config=config,
        patch_proj_weight=scaled((d, config.patch_dim), config.patch_dim),
        patch_proj_bias=np.zeros(d),
        cls_token=randn(rng, (1, d)),
        pos_embed=np.zeros((config.seq_len, d)),
    )
    for _ in range(config.depth):
        block = BlockWeights(
            gamma1=np.ones(d),
            beta1=np.zeros(d),
            w_ff=scaled((dff, d), d),
            b_ff=np.zeros(dff),
            w_dense=scaled((d, dff), dff),
            b_dense=np.zeros(d),
            gamma2=np.ones(d),
            beta2=np.zeros(d),
        )
        if config.mixer == "attention":
            block.w_q = scaled((d, d), d)
            block.b_q = np.zeros(d)
            block.w_k = scaled((d, d), d)
            block.b_k = np.zeros(d)
            block.w_v = scaled((d, d), d)
            block.b_v = np.zeros(d)
            block.w_o = scaled((d, d), d)
            block.b_o = np.zeros(d)
        model.blocks.append(block)
    model.head_weight = scaled((config.num_classes, d), d)
    model.head_bias = np.zeros(config.num_classes)
    return model


# --- model directory I/O ----------------------------------------------------

_BLOCK_FIELDS = ("gamma1", "beta1", "w_ff", "b_ff", "w_dense", "b_dense", "gamma2", "beta2")
_ATTN_FIELDS = ("w_q", "b_q", "w_k", "b_k", "w_v", "b_v", "w_o", "b_o")
_MANIFEST = "manifest.txt"


def _config_items(config: FitConfig) -> list[tuple[str, str]]:
    return [
        ("img_h", str(config.img_size[0])),
        ("img_w", str(config.img_size[1])),
        ("patch_h", str(config.patch_size[0])),
        ("patch_w", str(config.patch_size[1])),
        ("in_chans", str(config.in_chans)),
        ("embed_dim", str(config.embed_dim)),
        ("dim_feedforward", str(config.dim_feedforward)),
        ("depth", str(config.depth)),
        ("num_classes", str(config.num_classes)),
        ("num_heads", str(config.num_heads)),
        ("dropout_rate", repr(config.dropout_rate)),
        ("mixer", config.mixer),
    ]


def save_model(model: FitModel, directory) -> None:
    """Write a model as a directory: manifest.txt plus one FTNS file per tensor."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lines = [f"{key}={value}" for key, value in _config_items(model.config)]
    (directory / _MANIFEST).write_text("\n".join(lines) + "\n")
    for name, tensor in _named_tensors(model):
        write_tensor(tensor, directory / f"{name}.ftns")


def _named_tensors(model: FitModel):
    yield "patch_proj_weight", model.patch_proj_weight
    yield "patch_proj_bias", model.patch_proj_bias
    yield "cls_token", model.cls_token
    yield "pos_embed", model.pos_embed
    fields = _BLOCK_FIELDS + (_ATTN_FIELDS if model.config.mixer == "attention" else ())
    for i, block in enumerate(model.blocks):
        for name in fields:
            yield f"block{i}.{name}", getattr(block, name)
    yield "head_weight", model.head_weight
    yield "head_bias", model.head_bias


def _expected_shapes(config: FitConfig) -> dict[str, tuple[int, ...]]:
    d = config.embed_dim
    dff = config.dim_feedforward
    shapes = {
        "patch_proj_weight": (d, config.patch_dim),
        "patch_proj_bias": (d,),
        "cls_token": (1, d),
        "pos_embed": (config.seq_len, d),
        "head_weight": (config.num_classes, d),
        "head_bias": (config.num_classes,),
    }
    block = {
        "gamma1": (d,), "beta1": (d,),
        "w_ff": (dff, d), "b_ff": (dff,),
        "w_dense": (d, dff), "b_dense": (d,),
        "gamma2": (d,), "beta2": (d,),
    }
    if config.mixer == "attention":
        for name in _ATTN_FIELDS:
            block[name] = (d, d) if name.startswith("w") else (d,)
    for i in range(config.depth):
        for name, shape in block.items():
            shapes[f"block{i}.{name}"] = shape
    return shapes


def load_model(directory) -> FitModel:
    """Read a save_model directory back; shape mismatches raise ConfigError."""
    directory = Path(directory)
    manifest = directory / _MANIFEST
    if not manifest.is_file():
        raise ConfigError(f"missing manifest: {manifest}")
    entries = {}
    for ln, line in enumerate(manifest.read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{manifest}:{ln}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        entries[key.strip()] = value.strip()
    try:
        config = FitConfig(
            img_size=(int(entries["img_h"]), int(entries["img_w"])),
            patch_size=(int(entries["patch_h"]), int(entries["patch_w"])),
            in_chans=int(entries["in_chans"]),
            embed_dim=int(entries["embed_dim"]),
            dim_feedforward=int(entries["dim_feedforward"]),
            depth=int(entries["depth"]),
            num_classes=int(entries["num_classes"]),
            num_heads=int(entries["num_heads"]),
            dropout_rate=float(entries["dropout_rate"]),
            mixer=entries["mixer"],
        )
    except KeyError as exc:
        raise ConfigError(f"{manifest}: missing required key {exc.args[0]!r}") from exc

    tensors = {}
    for name, shape in _expected_shapes(config).items():
        path = directory / f"{name}.ftns"
        if not path.is_file():
            raise ConfigError(f"missing tensor file: {path}")
        t = read_tensor(path)
        if t.shape != shape:
            raise ConfigError(
                f"{path}: tensor shape {t.shape} does not match configured {shape}"
            )
        tensors[name] = t

    blocks = []
    fields = _BLOCK_FIELDS + (_ATTN_FIELDS if config.mixer == "attention" else ())
    for i in range(config.depth):
        blocks.append(
            BlockWeights(**{name: tensors[f"block{i}.{name}"] for name in fields})
        )
    return FitModel(
        config=config,
        patch_proj_weight=tensors["patch_proj_weight"],
        patch_proj_bias=tensors["patch_proj_bias"],
        cls_token=tensors["cls_token"],
        pos_embed=tensors["pos_embed"],
        blocks=blocks,
        head_weight=tensors["head_weight"],
        head_bias=tensors["head_bias"],
    )


def bench_mixing(seq_lens, d: int, repeats: int = 5, seed: int = 42):
    """Time fourier_mixing vs attention_mixing on [S, d] f32 inputs."""
    from .bench import BenchRow, time_median

    num_heads = 4 if d % 4 == 0 else 1
    rng = Rng(seed)
    rows = []
    for s in seq_lens:
        x = randn(rng, (s, d), np.float32)
        block = BlockWeights()
        for name in _ATTN_FIELDS:
            if name.startswith("w"):
                setattr(block, name, randn(rng, (d, d), np.float32) / np.sqrt(d))
            else:
                setattr(block, name, np.zeros(d, dtype=np.float32))
        cases = (
            ("fourier", lambda x=x: fourier_mixing(x)),
            ("attention", lambda x=x, b=block: attention_mixing(x, b, num_heads)),
        )
        for method, fn in cases:
            median_ms, checksum = time_median(fn, repeats)
            rows.append(
                BenchRow("mixing", f"S={s} d={d}", method, median_ms, repeats, checksum)
            )
    return rows
