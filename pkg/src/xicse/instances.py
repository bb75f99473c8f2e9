"""Instance specifications and the seeded instance generators.

An InstanceSpec bundles everything one run needs: the weight pair,
functionals, germs, a t-grid, sampling parameters, and optional auxiliary
data used by specific verification profiles (restriction index, valuation
direction, a partner pair for product checks).  Generation is a pure
function of (seed, count, profile): same arguments, same instances, on any
platform.  Generated numeric data is dyadic, so the exact rational paths
apply to every generated instance.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, replace
from fractions import Fraction
from random import Random

from ._util import mix64
from .core import Functional, Germ, MultiIndex, TropicalWeight, WeightPair
from .serialize import (
    SCHEMA,
    SpecValidationError,
    functional_from_json,
    functional_to_json,
    germ_from_json,
    germ_to_json,
    optional_weight_from_json,
    weight_from_json,
    weight_to_json,
)

PROFILES = ("product", "tropical", "restrictable", "productable", "valuative")

DEFAULT_GRID = (0.0, 5.0, 11)
DEFAULT_SAMPLES = 100_000


@dataclass(frozen=True)
class InstanceSpec:
    """One self-contained problem instance."""

    dimension: int
    phi: TropicalWeight
    psi: TropicalWeight | None = None
    functionals: tuple = ()
    germs: tuple = ()
    grid: tuple = DEFAULT_GRID
    seed: int = 0
    samples: int = DEFAULT_SAMPLES
    tol: tuple = ()
    profile: str = "custom"
    k: int | None = None
    w: tuple | None = None
    phi2: TropicalWeight | None = None
    psi2: TropicalWeight | None = None
    xi2: Functional | None = None

    @property
    def weights(self) -> WeightPair:
        return WeightPair(self.phi, self.psi)

    @property
    def weights2(self) -> WeightPair:
        if self.phi2 is None:
            raise ValueError("instance has no partner pair")
        return WeightPair(self.phi2, self.psi2)

    @property
    def xi(self) -> Functional:
        return self.functionals[0]

    @property
    def germ(self) -> Germ:
        return self.germs[0]

    @property
    def grid_values(self) -> tuple:
        t0, t1, steps = self.grid
        if steps == 1:
            return (float(t0),)
        return tuple(t0 + (t1 - t0) * i / (steps - 1) for i in range(int(steps)))

    @property
    def tol_map(self) -> dict:
        return dict(self.tol)

    def to_json(self) -> dict:
        out = {
            "schema": SCHEMA,
            "dimension": self.dimension,
            "phi": weight_to_json(self.phi),
            "psi": weight_to_json(self.psi),
            "functionals": [functional_to_json(x) for x in self.functionals],
            "germs": [germ_to_json(g) for g in self.germs],
            "grid": {"t0": self.grid[0], "t1": self.grid[1], "steps": self.grid[2]},
            "seed": self.seed,
            "samples": self.samples,
            "profile": self.profile,
        }
        if self.tol:
            out["tol"] = dict(self.tol)
        if self.k is not None:
            out["k"] = self.k
        if self.w is not None:
            out["w"] = [float(v) for v in self.w]
        if self.phi2 is not None:
            out["phi2"] = weight_to_json(self.phi2)
            out["psi2"] = weight_to_json(self.psi2)
            out["xi2"] = functional_to_json(self.xi2)
        return out

    @classmethod
    def from_json(cls, obj, pointer: str = "") -> "InstanceSpec":
        if not isinstance(obj, dict):
            raise SpecValidationError("instance must be an object", pointer)
        if "phi" not in obj:
            raise SpecValidationError("missing phi", f"{pointer}/phi")
        phi = weight_from_json(obj["phi"], f"{pointer}/phi")
        dim = obj.get("dimension", phi.dimension)
        if not isinstance(dim, int) or dim != phi.dimension:
            raise SpecValidationError(
                f"dimension {dim!r} does not match phi ({phi.dimension})",
                f"{pointer}/dimension",
            )
        psi = optional_weight_from_json(obj.get("psi"), f"{pointer}/psi")
        if psi is not None and psi.dimension != dim:
            raise SpecValidationError("psi dimension mismatch", f"{pointer}/psi")
        functionals = []
        for i, fx in enumerate(obj.get("functionals", [])):
            functionals.append(
                functional_from_json(fx, dim, f"{pointer}/functionals/{i}")
            )
        germs = []
        for i, g in enumerate(obj.get("germs", [])):
            germs.append(germ_from_json(g, dim, f"{pointer}/germs/{i}"))
        grid = DEFAULT_GRID
        if "grid" in obj:
            g = obj["grid"]
            if not isinstance(g, dict):
                raise SpecValidationError("grid must be an object", f"{pointer}/grid")
            try:
                grid = (float(g["t0"]), float(g["t1"]), int(g["steps"]))
            except (KeyError, TypeError, ValueError):
                raise SpecValidationError(
                    "grid needs numeric t0, t1 and integer steps", f"{pointer}/grid"
                ) from None
            if grid[2] < 1 or grid[1] < grid[0] or grid[0] < 0:
                raise SpecValidationError("grid range invalid", f"{pointer}/grid")
        seed = obj.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise SpecValidationError("seed must be an integer", f"{pointer}/seed")
        samples = obj.get("samples", DEFAULT_SAMPLES)
        if not isinstance(samples, int) or samples < 1:
            raise SpecValidationError(
                "samples must be a positive integer", f"{pointer}/samples"
            )
        tol = obj.get("tol", {})
        if not isinstance(tol, dict):
            raise SpecValidationError("tol must be an object", f"{pointer}/tol")
        kwargs = {}
        if obj.get("phi2") is not None:
            kwargs["phi2"] = weight_from_json(obj["phi2"], f"{pointer}/phi2")
            kwargs["psi2"] = optional_weight_from_json(obj.get("psi2"), f"{pointer}/psi2")
            if obj.get("xi2") is not None:
                kwargs["xi2"] = functional_from_json(
                    obj["xi2"], kwargs["phi2"].dimension, f"{pointer}/xi2"
                )
        if obj.get("k") is not None:
            kwargs["k"] = int(obj["k"])
        if obj.get("w") is not None:
            kwargs["w"] = tuple(obj["w"])
        return cls(
            dimension=dim,
            phi=phi,
            psi=psi,
            functionals=tuple(functionals),
            germs=tuple(germs),
            grid=grid,
            seed=seed,
            samples=samples,
            tol=tuple(sorted(tol.items())),
            profile=str(obj.get("profile", "custom")),
            **kwargs,
        )


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def _dyadic(rng: Random, lo: float, hi: float, den: int = 16) -> Fraction:
    return Fraction(rng.randint(round(lo * den), round(hi * den)), den)


def _dyadic_nonzero(rng: Random, lo: float, hi: float, den: int = 16) -> Fraction:
    while True:
        v = _dyadic(rng, lo, hi, den)
        if v != 0:
            return v


def _random_alpha(rng: Random, n: int, max_entry: int = 3) -> MultiIndex:
    return MultiIndex(tuple(rng.randint(0, max_entry) for _ in range(n)))


def _random_functional(rng: Random, n: int, max_support: int = 4, max_entry: int = 3) -> Functional:
    size = rng.randint(1, max_support)
    coeffs = {}
    while len(coeffs) < size:
        alpha = _random_alpha(rng, n, max_entry)
        coeffs[alpha] = complex(
            float(_dyadic_nonzero(rng, -2, 2)), float(_dyadic(rng, -2, 2))
        )
    return Functional(n, coeffs)


def _random_germ(rng: Random, n: int, max_support: int = 4, max_entry: int = 3) -> Germ:
    size = rng.randint(1, max_support)
    coeffs = {}
    while len(coeffs) < size:
        alpha = _random_alpha(rng, n, max_entry)
        coeffs[alpha] = complex(
            float(_dyadic_nonzero(rng, -2, 2)), float(_dyadic(rng, -2, 2))
        )
    return Germ(n, coeffs)


def _monomial_max_weight(rng: Random, n: int, lo=0.25, hi=5.0) -> TropicalWeight:
    return TropicalWeight.monomial_max([_dyadic(rng, lo, hi, 16) for _ in range(n)])


def _single_psi(rng: Random, n: int, hi=1.5) -> TropicalWeight | None:
    # mu entries < 2 keep every monomial integrable against psi
    mu = [_dyadic(rng, 0, hi, 16) for _ in range(n)]
    if all(v == 0 for v in mu):
        return None
    return TropicalWeight([mu])


def _tropical_weight(rng: Random, n: int, max_pieces: int = 4) -> TropicalWeight:
    count = rng.randint(2, max_pieces)
    pieces = []
    for _ in range(count):
        while True:
            p = [_dyadic(rng, 0, 4, 8) for _ in range(n)]
            if any(v != 0 for v in p):
                pieces.append(p)
                break
    return TropicalWeight(pieces)


def _psi_for(rng: Random, n: int) -> TropicalWeight | None:
    roll = rng.random()
    if roll < 0.5:
        return None
    if roll < 0.85:
        return _single_psi(rng, n)
    pieces = []
    for _ in range(2):
        while True:
            p = [_dyadic(rng, 0, 1.5, 16) for _ in range(n)]
            if any(v != 0 for v in p):
                pieces.append(p)
                break
    return TropicalWeight(pieces)


def _product_instance(rng: Random, index: int, seed: int, n_max: int = 4) -> InstanceSpec:
    n = rng.randint(1, n_max)
    phi = _monomial_max_weight(rng, n)
    psi = _single_psi(rng, n) if rng.random() < 0.5 else None
    return InstanceSpec(
        dimension=n,
        phi=phi,
        psi=psi,
        functionals=(_random_functional(rng, n),),
        germs=(_random_germ(rng, n),),
        seed=mix64(seed, index),
        profile="product",
    )


def _tropical_instance(rng: Random, index: int, seed: int) -> InstanceSpec:
    n = rng.randint(2, 4)
    phi = _tropical_weight(rng, n)
    psi = _psi_for(rng, n)
    return InstanceSpec(
        dimension=n,
        phi=phi,
        psi=psi,
        functionals=(_random_functional(rng, n),),
        germs=(_random_germ(rng, n),),
        seed=mix64(seed, index),
        profile="tropical",
    )


def _restrictable_instance(rng: Random, index: int, seed: int) -> InstanceSpec:
    n = rng.randint(2, 4)
    k = rng.randint(1, n - 1)
    # one piece supported on the surviving coordinates guarantees the
    # restriction is not identically -infinity
    survivor = [_dyadic_nonzero(rng, 0.25, 3) if i < k else Fraction(0) for i in range(n)]
    if all(v == 0 for v in survivor[:k]):
        survivor[0] = Fraction(1)
    pieces = [survivor]
    for _ in range(rng.randint(0, 2)):
        while True:
            p = [_dyadic(rng, 0, 3, 8) for _ in range(n)]
            if any(v != 0 for v in p):
                pieces.append(p)
                break
    phi = TropicalWeight(pieces)
    psi = None
    if rng.random() < 0.4:
        mu = [_dyadic(rng, 0, 1.5, 16) if i < k else Fraction(0) for i in range(n)]
        if any(v != 0 for v in mu):
            psi = TropicalWeight([mu])
    return InstanceSpec(
        dimension=n,
        phi=phi,
        psi=psi,
        functionals=(_random_functional(rng, k),),
        germs=(_random_germ(rng, n),),
        seed=mix64(seed, index),
        profile="restrictable",
        k=k,
    )


def _productable_instance(rng: Random, index: int, seed: int) -> InstanceSpec:
    def half():
        n = rng.randint(1, 2)
        if rng.random() < 0.7:
            phi = TropicalWeight.monomial_max([_dyadic(rng, 0.25, 2) for _ in range(n)])
            psi = _single_psi(rng, n, hi=1.0) if rng.random() < 0.4 else None
        else:
            phi = _tropical_weight(rng, max(n, 2), max_pieces=3)
            n = phi.dimension
            psi = _single_psi(rng, n, hi=1.0) if rng.random() < 0.4 else None
        xi = _random_functional(rng, n, max_support=3, max_entry=3)
        return phi, psi, xi

    phi1, psi1, xi1 = half()
    phi2, psi2, xi2 = half()
    return InstanceSpec(
        dimension=phi1.dimension,
        phi=phi1,
        psi=psi1,
        functionals=(xi1,),
        seed=mix64(seed, index),
        profile="productable",
        phi2=phi2,
        psi2=psi2,
        xi2=xi2,
    )


def _valuative_instance(rng: Random, index: int, seed: int) -> InstanceSpec:
    base = _tropical_instance(rng, index, seed) if rng.random() < 0.5 else _product_instance(rng, index, seed)
    w = tuple(_dyadic_nonzero(rng, 0.25, 4) for _ in range(base.dimension))
    return replace(base, profile="valuative", w=w)


_BUILDERS = {
    "product": _product_instance,
    "tropical": _tropical_instance,
    "restrictable": _restrictable_instance,
    "productable": _productable_instance,
    "valuative": _valuative_instance,
}


def generate_instances(seed: int, count: int, profile: str) -> list:
    """Deterministic instance family for a profile; pure in (seed, count, profile)."""
    if profile not in _BUILDERS:
        raise ValueError(f"unknown profile {profile!r}; choose from {PROFILES}")
    if count < 0:
        raise ValueError("count must be nonnegative")
    rng = Random(mix64(seed, zlib.crc32(profile.encode())))
    build = _BUILDERS[profile]
    return [build(rng, i, seed) for i in range(count)]
