"""Experiment configuration files (INI syntax, one experiment per file).

Sections and keys, with defaults::

    [domain]     kind = circle | ellipse | fourier-rho
                 a, b (ellipse) or eccentricity; perimeter (circle, 1.0)
                 mean, cos, sin (fourier-rho; "k:value, k:value" lists)
                 normalize = true (ellipse, fourier-rho)
    [model]      kind = birkhoff | outer | symplectic | shear
                 eps = 0.0, sign = 1 (shear only)
    [rotation]   m, n
    [numerics]   grid = 256, tolerance = 1e-8, reject_threshold = 1e-6,
                 fiber_scan = 64, margin = 1e-3, invariance_grid = auto,
                 seeds = 5, uniqueness_grid = 64, minimality_grid = 40, segment = 3
    [family]     kind = ellipse-eccentricity | fourier-perturbation | shear-toy
                 eps_lo, eps_hi, points; model = birkhoff
                 fourier-perturbation: eccentricity (base ellipse) or the
                 [domain] section as base, direction = "cos:k:value, ...",
                 mode = multiplicative
    [portrait]   orbits = 24, iterates = 300, pad = 0.02
    [output]     dir = caustics-out
"""
from __future__ import annotations

import configparser
from dataclasses import asdict, dataclass, field

from .errors import ConfigError, DomainError
from .family import FAMILY_KINDS, FamilySpec
from .geometry import TWO_PI, DomainSpec, ellipse_spec, harmonics
from .periodic import Rotation

KINDS = ("phase-portrait", "twist-interval", "find-graph", "scan-family", "certify")
MODEL_KINDS = ("birkhoff", "outer", "symplectic", "shear")


@dataclass(frozen=True)
class Numerics:
    grid: int = 256
    tolerance: float = 1e-8
    reject_threshold: float = 1e-6
    fiber_scan: int = 64
    margin: float = 1e-3
    invariance_grid: int | None = None
    seeds: int = 5
    uniqueness_grid: int = 64
    minimality_grid: int = 40
    segment: int = 3


@dataclass(frozen=True)
class Portrait:
    orbits: int = 24
    iterates: int = 300
    pad: float = 0.02


@dataclass
class ExperimentConfig:
    kind: str
    domain: DomainSpec | None = None
    model: str | None = None
    shear: dict = field(default_factory=dict)
    rotation: Rotation | None = None
    numerics: Numerics = Numerics()
    family: FamilySpec | None = None
    portrait: Portrait = Portrait()
    out_dir: str = "caustics-out"

    def describe(self) -> dict:
        d = {"kind": self.kind}
        if self.model:
            d["model"] = self.model
        if self.model == "shear":
            d["shear"] = dict(sorted(self.shear.items()))
        if self.domain is not None:
            d["domain"] = self.domain.to_dict()
        if self.rotation is not None:
            d["rotation"] = [self.rotation.m, self.rotation.n]
        if self.family is not None:
            d["family"] = self.family.to_dict()
        if self.kind == "phase-portrait":
            d["portrait"] = asdict(self.portrait)
        else:
            d["numerics"] = asdict(self.numerics)
        return d


def _pairs(text, what):
    """'4:0.01, 6:-0.002' -> {4: 0.01, 6: -0.002}."""
    out = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        try:
            k, v = item.split(":")
            out[int(k)] = float(v)
        except ValueError:
            raise ConfigError(f"bad {what} entry {item!r}; expected k:value") from None
    return out


def _direction(text):
    """'cos:4:1.0, sin:6:0.5' -> conjugate-symmetric (k, c) pairs."""
    coeffs = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        try:
            kind, k, v = item.split(":")
            k, v = int(k), float(v)
        except ValueError:
            raise ConfigError(f"bad direction entry {item!r}; expected cos:k:value or sin:k:value") from None
        if kind == "cos":
            half = (0.5 * v, 0.5 * v)
        elif kind == "sin":
            half = (-0.5j * v, 0.5j * v)
        else:
            raise ConfigError(f"direction entry {item!r} must start with cos or sin")
        coeffs[k] = coeffs.get(k, 0) + half[0]
        coeffs[-k] = coeffs.get(-k, 0) + half[1]
    return tuple(sorted(coeffs.items()))


class _Reader:
    def __init__(self, parser):
        self.p = parser

    def has(self, section, key=None):
        return self.p.has_section(section) and (key is None or self.p.has_option(section, key))

    def get(self, section, key, conv=str, default=None, required=False):
        if not self.has(section, key):
            if required:
                raise ConfigError(f"missing [{section}] {key}")
            return default
        raw = self.p.get(section, key)
        try:
            if conv is bool:
                return self.p.getboolean(section, key)
            return conv(raw)
        except ValueError:
            raise ConfigError(f"[{section}] {key} = {raw!r} is not a valid {conv.__name__}") from None


def _domain(r: _Reader) -> DomainSpec:
    kind = r.get("domain", "kind", required=True)
    normalize = r.get("domain", "normalize", bool, True)
    if kind == "circle":
        perimeter = r.get("domain", "perimeter", float, 1.0)
        return DomainSpec("fourier-rho", ((0, complex(perimeter / TWO_PI)),),
                          normalize=False)
    if kind == "ellipse":
        if r.has("domain", "eccentricity"):
            return ellipse_spec(r.get("domain", "eccentricity", float), normalize)
        a = r.get("domain", "a", float, required=True)
        b = r.get("domain", "b", float, required=True)
        return DomainSpec("ellipse", a=a, b=b, normalize=normalize)
    if kind == "fourier-rho":
        mean = r.get("domain", "mean", float, required=True)
        spec = harmonics(mean, _pairs(r.get("domain", "cos", default=""), "cos"),
                         _pairs(r.get("domain", "sin", default=""), "sin"))
        return DomainSpec("fourier-rho", spec.coefficients, normalize=normalize)
    raise ConfigError(f"unknown domain kind {kind!r}")


def _family(r: _Reader) -> FamilySpec:
    kind = r.get("family", "kind", required=True)
    if kind not in FAMILY_KINDS:
        raise ConfigError(f"unknown family kind {kind!r}")
    lo = r.get("family", "eps_lo", float, required=True)
    hi = r.get("family", "eps_hi", float, required=True)
    points = r.get("family", "points", int, required=True)
    model = r.get("family", "model", default="birkhoff")
    if model not in ("birkhoff", "outer", "symplectic"):
        raise ConfigError(f"unknown family model {model!r}")
    normalize = r.get("family", "normalize", bool, True)
    base, direction, mode = None, (), "multiplicative"
    if kind == "fourier-perturbation":
        if r.has("family", "eccentricity"):
            base = ellipse_spec(r.get("family", "eccentricity", float))
        elif r.has("domain"):
            base = _domain(r)
        else:
            raise ConfigError("fourier-perturbation needs [family] eccentricity or a [domain] section")
        direction = _direction(r.get("family", "direction", required=True))
        mode = r.get("family", "mode", default="multiplicative")
    return FamilySpec(kind, lo, hi, points, model, base, direction, mode, normalize)


def _numerics(r: _Reader) -> Numerics:
    d = Numerics()
    inv = r.get("numerics", "invariance_grid", default="auto")
    try:
        inv = None if inv == "auto" else int(inv)
    except ValueError:
        raise ConfigError(f"[numerics] invariance_grid = {inv!r} must be an integer or auto") from None
    num = Numerics(
        grid=r.get("numerics", "grid", int, d.grid),
        tolerance=r.get("numerics", "tolerance", float, d.tolerance),
        reject_threshold=r.get("numerics", "reject_threshold", float, d.reject_threshold),
        fiber_scan=r.get("numerics", "fiber_scan", int, d.fiber_scan),
        margin=r.get("numerics", "margin", float, d.margin),
        invariance_grid=inv,
        seeds=r.get("numerics", "seeds", int, d.seeds),
        uniqueness_grid=r.get("numerics", "uniqueness_grid", int, d.uniqueness_grid),
        minimality_grid=r.get("numerics", "minimality_grid", int, d.minimality_grid),
        segment=r.get("numerics", "segment", int, d.segment),
    )
    for name in ("tolerance", "reject_threshold", "margin"):
        if not getattr(num, name) > 0:
            raise ConfigError(f"[numerics] {name} must be positive")
    for name in ("grid", "fiber_scan", "seeds", "uniqueness_grid", "minimality_grid"):
        if getattr(num, name) < 2:
            raise ConfigError(f"[numerics] {name} must be at least 2")
    if num.grid < 4:
        raise ConfigError("[numerics] grid must be at least 4")
    return num


REQUIRES = {
    "phase-portrait": ("model",),
    "twist-interval": ("model",),
    "find-graph": ("model", "rotation"),
    "certify": ("model", "rotation"),
    "scan-family": ("family", "rotation"),
}


SECTIONS = ("experiment", "domain", "model", "rotation", "numerics", "family", "portrait", "output")


def parse_config(text: str, kind: str) -> ExperimentConfig:
    if kind not in KINDS:
        raise ConfigError(f"unknown experiment kind {kind!r}")
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unreadable config: {exc}") from None
    unknown = set(parser.sections()) - set(SECTIONS)
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    r = _Reader(parser)
    declared = r.get("experiment", "kind")
    if declared is not None and declared != kind:
        raise ConfigError(f"config declares kind {declared!r} but {kind!r} was requested")
    cfg = ExperimentConfig(kind, out_dir=r.get("output", "dir", default="caustics-out"))
    try:
        if r.has("model"):
            cfg.model = r.get("model", "kind", required=True)
            if cfg.model not in MODEL_KINDS:
                raise ConfigError(f"unknown model kind {cfg.model!r}")
            if cfg.model == "shear":
                cfg.shear = {"eps": r.get("model", "eps", float, 0.0),
                             "sign": r.get("model", "sign", int, 1)}
            else:
                cfg.domain = _domain(r)
                cfg.domain.build()  # convexity and closure are config errors too
        if r.has("rotation"):
            cfg.rotation = Rotation(r.get("rotation", "m", int, required=True),
                                    r.get("rotation", "n", int, required=True))
        if r.has("family"):
            cfg.family = _family(r)
        cfg.numerics = _numerics(r)
        cfg.portrait = Portrait(r.get("portrait", "orbits", int, 24),
                                r.get("portrait", "iterates", int, 300),
                                r.get("portrait", "pad", float, 0.02))
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    for need in REQUIRES[kind]:
        if getattr(cfg, need) is None:
            raise ConfigError(f"{kind} needs a [{need}] section")
    return cfg


def load_config(path, kind: str) -> ExperimentConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, kind)
