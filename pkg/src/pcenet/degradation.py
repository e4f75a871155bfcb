"""Simulation of imaging interferences and degraded-sequence synthesis.

Three interference classes are modeled: transmission disturbance (gamma +
gain + a low-frequency multiplicative illumination field), Gaussian blur,
and local light/dark spot artifacts. A degraded sequence takes one clean
image and produces K variants, each under an independently sampled recipe;
recipes are replayable and the whole construction is a pure function of
(seed, image id, k).
"""

import hashlib
from dataclasses import dataclass, field, asdict

import numpy as np

from . import kernels
from .errors import ConfigError, DimensionError, ParameterError
from .image_io import Image, make_fov_mask, resize_bilinear

# reference side for blur sigmas; sampled sigmas scale with actual side
SIGMA_REFERENCE_SIDE = 256
# probability that an enabled interference class is active in one recipe
ACTIVE_PROBABILITY = 0.8


@dataclass
class DegradationConfig:
    """Sampling ranges for the three interference classes.

    ``blur_sigma_range`` is in pixels at side 256 and scales linearly with
    the image side; ``artifact_radius_range`` is a fraction of the side.
    """

    enable_blur: bool = True
    enable_artifact: bool = True
    enable_transmission: bool = True
    blur_sigma_range: tuple = (1.0, 5.0)
    artifact_count_range: tuple = (1, 8)
    artifact_radius_range: tuple = (0.05, 0.25)
    artifact_strength_range: tuple = (0.1, 0.5)
    transmission_gamma_range: tuple = (0.6, 1.8)
    transmission_gain_range: tuple = (0.6, 1.3)
    illumination_field_range: tuple = (0.7, 1.3)
    illumination_field_scale: int = 4
    seed: int = 0

    def validate(self) -> "DegradationConfig":
        for name in (
            "blur_sigma_range",
            "artifact_count_range",
            "artifact_radius_range",
            "artifact_strength_range",
            "transmission_gamma_range",
            "transmission_gain_range",
            "illumination_field_range",
        ):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ConfigError(f"{name} has lo > hi: ({lo}, {hi})")
        if self.blur_sigma_range[0] < 0:
            raise ConfigError("blur sigmas must be >= 0")
        if self.transmission_gamma_range[0] <= 0:
            raise ConfigError("gamma must be > 0")
        if not 0 <= self.artifact_strength_range[0] <= self.artifact_strength_range[1] <= 1:
            raise ConfigError("artifact strengths must lie in [0, 1]")
        if self.illumination_field_scale < 2:
            raise ConfigError("illumination_field_scale must be >= 2")
        return self


@dataclass
class Recipe:
    """Fully sampled parameters for one degraded variant (replayable)."""

    image_id: str
    k: int
    use_transmission: bool
    use_blur: bool
    use_artifact: bool
    gamma: float
    gain: float
    field_grid: np.ndarray  # (g, g) multiplicative illumination grid
    sigma256: float  # blur sigma in pixels at side 256
    spots: np.ndarray  # (M, 5) rows: cy, cx, radius_px, strength, polarity

    def to_dict(self) -> dict:
        d = asdict(self)
        d["field_grid"] = self.field_grid.tolist()
        d["spots"] = self.spots.tolist()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Recipe":
        d = dict(d)
        d["field_grid"] = np.asarray(d["field_grid"], dtype=np.float64)
        d["spots"] = np.asarray(d["spots"], dtype=np.float64).reshape(-1, 5)
        return cls(**d)


@dataclass
class SeqLC:
    """One clean image with K degraded variants sharing its content."""

    clean: Image
    variants: list
    recipes: list
    K: int = field(default=0)

    def __post_init__(self):
        if self.K == 0:
            self.K = len(self.variants)


def _split(img):
    if isinstance(img, Image):
        return img.pixels, img
    return np.asarray(img), None


def _rewrap(pixels, original):
    if original is None:
        return pixels
    return Image(pixels=pixels, fov_mask=original.fov_mask)


def gaussian_kernel1d(sigma: float) -> np.ndarray:
    """Normalized 1D Gaussian samples truncated at 3 sigma."""
    radius = max(1, int(np.ceil(3.0 * sigma)))
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(t * t) / (2.0 * sigma * sigma))
    return k / k.sum()


def apply_blur(img, sigma: float):
    """Gaussian blur of standard deviation sigma (pixels), reflect borders."""
    pixels, orig = _split(img)
    if sigma < 0:
        raise ParameterError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return _rewrap(pixels.copy(), orig)
    k = gaussian_kernel1d(sigma)
    if k.shape[0] > min(pixels.shape[0], pixels.shape[1]):
        raise DimensionError("blur kernel larger than the raster")
    out = kernels.sep_filter(np.ascontiguousarray(pixels), k.astype(pixels.dtype))
    return _rewrap(out, orig)


def apply_artifact(img, spots):
    """Add Gaussian light/dark spots and clamp to [0, 1].

    Each spot is ((cy, cx), radius_px, strength, polarity) and contributes
    polarity * strength * exp(-d^2 / (2 (radius/2)^2)) to every channel.
    """
    pixels, orig = _split(img)
    h, w = pixels.shape[0], pixels.shape[1]
    if len(spots) == 0:
        return _rewrap(pixels.copy(), orig)
    rows = []
    for (cy, cx), radius, strength, polarity in spots:
        if not (0 <= cy < h and 0 <= cx < w):
            raise ParameterError(f"spot center ({cy}, {cx}) outside the raster")
        if radius <= 0:
            raise ParameterError(f"spot radius must be > 0, got {radius}")
        rows.append((cy, cx, radius, strength, polarity))
    field_hw = kernels.render_spots(h, w, np.asarray(rows, dtype=np.float64))
    out = pixels + field_hw.astype(pixels.dtype)[:, :, None]
    return _rewrap(np.clip(out, 0.0, 1.0), orig)


def apply_transmission(img, gamma: float, gain: float, field_hw: np.ndarray):
    """Illumination-path disturbance: clamp(gain * field * img**gamma).

    ``field_hw`` is a low-frequency multiplicative raster with values in
    [0.5, 1.5], typically the bilinear upsample of a small random grid.
    """
    pixels, orig = _split(img)
    if gamma <= 0:
        raise ParameterError(f"gamma must be > 0, got {gamma}")
    if field_hw.shape != pixels.shape[:2]:
        raise DimensionError("field shape does not match the raster")
    out = gain * field_hw.astype(pixels.dtype)[:, :, None] * np.power(pixels, gamma)
    return _rewrap(np.clip(out, 0.0, 1.0), orig)


def _recipe_rng(seed: int, image_id: str, k: int) -> np.random.Generator:
    digest = hashlib.sha256(image_id.encode("utf-8")).digest()
    entropy = (
        seed & 0xFFFFFFFFFFFFFFFF,
        int.from_bytes(digest[:8], "little"),
        k,
    )
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def sample_recipe(rng: np.random.Generator, cfg: DegradationConfig, side: int, image_id: str, k: int) -> Recipe:
    """Draw one recipe. All parameter groups are sampled in a fixed order
    regardless of which classes come out active, so streams stay aligned."""
    enabled = (cfg.enable_transmission, cfg.enable_blur, cfg.enable_artifact)
    if not any(enabled):
        raise ConfigError("all interference classes are disabled")
    while True:
        active = tuple(e and rng.random() < ACTIVE_PROBABILITY for e in enabled)
        if any(active):
            break
    use_transmission, use_blur, use_artifact = active

    gamma = rng.uniform(*cfg.transmission_gamma_range)
    gain = rng.uniform(*cfg.transmission_gain_range)
    g = cfg.illumination_field_scale
    field_grid = rng.uniform(*cfg.illumination_field_range, size=(g, g))

    sigma256 = rng.uniform(*cfg.blur_sigma_range)

    count = int(rng.integers(cfg.artifact_count_range[0], cfg.artifact_count_range[1] + 1))
    spots = np.empty((count, 5), dtype=np.float64)
    for m in range(count):
        spots[m, 0] = rng.uniform(0, side)
        spots[m, 1] = rng.uniform(0, side)
        spots[m, 2] = rng.uniform(*cfg.artifact_radius_range) * side
        spots[m, 3] = rng.uniform(*cfg.artifact_strength_range)
        spots[m, 4] = 1.0 if rng.random() < 0.5 else -1.0

    return Recipe(
        image_id=image_id,
        k=k,
        use_transmission=use_transmission,
        use_blur=use_blur,
        use_artifact=use_artifact,
        gamma=float(gamma),
        gain=float(gain),
        field_grid=field_grid,
        sigma256=float(sigma256),
        spots=spots,
    )


def apply_recipe(clean: Image, recipe: Recipe) -> Image:
    """Replay a recipe on a clean image: transmission -> blur -> artifact,
    restricted to the FOV disc (exterior pixels stay untouched)."""
    side = clean.side
    mask = clean.fov_mask if clean.fov_mask is not None else make_fov_mask(side)
    out = clean.pixels
    if recipe.use_transmission:
        field_hw = resize_bilinear(recipe.field_grid.astype(out.dtype), side, side)
        out = apply_transmission(out, recipe.gamma, recipe.gain, field_hw)
    if recipe.use_blur:
        out = apply_blur(out, recipe.sigma256 * side / SIGMA_REFERENCE_SIDE)
    if recipe.use_artifact:
        spot_list = [
            ((s[0], s[1]), s[2], s[3], s[4]) for s in recipe.spots
        ]
        out = apply_artifact(out, spot_list)
    if out is clean.pixels:
        out = out.copy()
    out = np.where(mask[:, :, None], out, clean.pixels)
    return Image(pixels=out, fov_mask=clean.fov_mask)


def make_seqlc(clean: Image, cfg: DegradationConfig, K: int, image_id: str = "") -> SeqLC:
    """Generate K degraded variants of one clean image.

    Deterministic given (cfg.seed, image_id, k); each enabled interference
    class is active with probability 0.8, re-drawn until at least one is.
    Images without an FOV mask get the default 0.97-radius disc.
    """
    if K < 1:
        raise ParameterError(f"K must be >= 1, got {K}")
    cfg.validate()
    if not (cfg.enable_blur or cfg.enable_artifact or cfg.enable_transmission):
        raise ConfigError("all interference classes are disabled")
    clean.validate()
    base = clean if clean.fov_mask is not None else Image(
        pixels=clean.pixels, fov_mask=make_fov_mask(clean.side)
    )
    variants = []
    recipes = []
    for k in range(K):
        rng = _recipe_rng(cfg.seed, image_id, k)
        recipe = sample_recipe(rng, cfg, clean.side, image_id, k)
        variants.append(apply_recipe(base, recipe))
        recipes.append(recipe)
    return SeqLC(clean=base, variants=variants, recipes=recipes, K=K)
