"""Built-in multiplicative function families and spec-file parsing.

Presets carry both the defining polynomial tables (v <= V) and an exact
prime-power evaluator for arbitrary exponents, so they can be sieved
without integer overflow by working mod q throughout.
"""

from __future__ import annotations

import json
from typing import Optional

from .intpoly import IntPoly
from .resring import BEYOND_CONSTANT_ONE, BEYOND_UNDEFINED, MultFnSpec, Periodic

__all__ = ["preset", "preset_names", "spec_from_dict", "load_spec_file", "ground_truth"]

_PRESET_V = 6


def _phi_poly(v: int) -> IntPoly:
    # phi(p^v) = p^(v-1) (p - 1)
    return IntPoly([-1, 1]).shift(v - 1)


def _sigma_poly(r: int, v: int) -> IntPoly:
    # sigma_r(p^v) = 1 + p^r + ... + p^(rv)
    coeffs = [0] * (r * v + 1)
    for j in range(v + 1):
        coeffs[r * j] = 1
    return IntPoly(coeffs)


def _phi_value(i: int, p: int, v: int) -> int:
    return p ** (v - 1) * (p - 1)


def _sigma_value_fn(r: int):
    def value(i: int, p: int, v: int) -> int:
        return sum(p ** (r * j) for j in range(v + 1))

    return value


def preset(name: str) -> MultFnSpec:
    """Named family: phi, sigma, sigma_r:<r>, phi_sigma_joint."""
    if name == "phi":
        return MultFnSpec(
            names=("phi",),
            polys=(tuple(_phi_poly(v) for v in range(1, _PRESET_V + 1)),),
            beyond_v=BEYOND_UNDEFINED,
            prime_power_fn=_phi_value,
            preset="phi",
        )
    if name == "sigma":
        name = "sigma_r:1"
    if name.startswith("sigma_r:"):
        r = int(name.split(":", 1)[1])
        if r < 1:
            raise ValueError("sigma_r needs r >= 1")
        label = "sigma" if r == 1 else f"sigma_{r}"
        return MultFnSpec(
            names=(label,),
            polys=(tuple(_sigma_poly(r, v) for v in range(1, _PRESET_V + 1)),),
            beyond_v=BEYOND_UNDEFINED,
            prime_power_fn=_sigma_value_fn(r),
            preset=label,
        )
    if name == "sigma_2":
        return preset("sigma_r:2")
    if name == "sigma_3":
        return preset("sigma_r:3")
    if name == "phi_sigma_joint":
        sig = _sigma_value_fn(1)

        def joint(i: int, p: int, v: int) -> int:
            return _phi_value(i, p, v) if i == 0 else sig(i, p, v)

        return MultFnSpec(
            names=("phi", "sigma"),
            polys=(
                tuple(_phi_poly(v) for v in range(1, _PRESET_V + 1)),
                tuple(_sigma_poly(1, v) for v in range(1, _PRESET_V + 1)),
            ),
            beyond_v=BEYOND_UNDEFINED,
            prime_power_fn=joint,
            preset="phi_sigma_joint",
        )
    raise ValueError(f"unknown preset {name!r}")


def preset_names() -> list[str]:
    return ["phi", "sigma", "sigma_2", "sigma_3", "phi_sigma_joint"]


def spec_from_dict(d: dict) -> MultFnSpec:
    """Build a MultFnSpec from a parsed spec-file document.

    Schema: {"preset": name} or
    {"K": int, "V": int, "polys": [[coeff arrays per v] per i],
     "beyond_v": "undefined" | "constant_one" | {"periodic": pi},
     "names": optional list of labels}
    """
    if "preset" in d:
        return preset(d["preset"])
    K, V = int(d["K"]), int(d["V"])
    polys = d["polys"]
    if len(polys) != K or any(len(row) != V for row in polys):
        raise ValueError("polys must be a K x V array of coefficient arrays")
    beyond = d.get("beyond_v", "undefined")
    if isinstance(beyond, dict):
        beyond = Periodic(int(beyond["periodic"]))
    elif beyond == "constant_one":
        beyond = BEYOND_CONSTANT_ONE
    elif beyond == "undefined":
        beyond = BEYOND_UNDEFINED
    else:
        raise ValueError(f"unknown beyond_v rule {beyond!r}")
    names = tuple(d.get("names", [f"f{i+1}" for i in range(K)]))
    return MultFnSpec(
        names=names,
        polys=tuple(tuple(IntPoly(c) for c in row) for row in polys),
        beyond_v=beyond,
    )


def load_spec_file(path: str) -> MultFnSpec:
    with open(path) as fh:
        return spec_from_dict(json.load(fh))


def ground_truth(preset_name: str, q: int) -> Optional[dict]:
    """Known classification for the built-in presets.

    Returns {"wud": bool, "k": admissible index or None} from the
    published characterizations: phi iff gcd(q,6)=1 (k=1); sigma iff
    6 does not divide q, with Q(1)=odd q, Q(2)={gcd(q,6)=2}; sigma_3
    with Q(1)={gcd(q,14)=1}, Q(2)={gcd(q,6)=2}; joint (phi, sigma) iff
    gcd(q,6)=1 (k=1).  None for presets without a full table.
    """
    import math

    if preset_name == "phi":
        # even q: every W_v has the factor T-1, so no R_v is ever nonempty
        return {"wud": math.gcd(q, 6) == 1, "k": 1 if q % 2 else None}
    if preset_name in ("sigma", "sigma_r:1"):
        if q % 2 == 1:
            return {"wud": True, "k": 1}
        return {"wud": q % 3 != 0, "k": 2}
    if preset_name in ("sigma_3", "sigma_r:3"):
        if q % 2 == 1:
            return {"wud": q % 7 != 0, "k": 1}
        return {"wud": q % 3 != 0, "k": 2}
    if preset_name == "phi_sigma_joint":
        if q % 2 == 0:
            return {"wud": False, "k": None}
        return {"wud": q % 3 != 0, "k": 1 if q % 3 else 2}
    return None
