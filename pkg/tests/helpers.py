import numpy as np

from orbitforge.weights import DiscreteWeight, Log2Affine


def random_weight(rng, half=4, spread=3.0, slope=1.5):
    """Random weight on Z: log2 values on [-half, half], affine tails matching the edges."""
    lv = rng.uniform(-spread, spread, size=2 * half + 1)
    bl, br = rng.uniform(-slope, slope, size=2)
    left = Log2Affine(float(lv[0] + bl * half), float(bl))
    right = Log2Affine(float(lv[-1] - br * half), float(br))
    return DiscreteWeight(-half, half, left_tail=left, right_tail=right, log2_values=tuple(float(v) for v in lv))


def weight_from_seed(seed, **kw):
    return random_weight(np.random.default_rng(seed), **kw)
