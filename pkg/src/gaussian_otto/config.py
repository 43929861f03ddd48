"""
Run manifests: a flat ``key = value`` file, overridden by environment
variables (``GOTTO_<KEY>``), overridden in turn by command-line values.

Single-bath experiments reuse the hot-bath keys (``n_hot``, ``omega_h``,
``alpha_h``, ``T_h``) for their bath and ``T_m``/``omega_m`` for the WM.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .dynamics import IntegratorControls, SwitchingProfile
from .engine import ADIABAT_MODES, EngineConfig
from .errors import InvalidArgument
from .models import BathSpec, CouplingSpec, WorkingMediumSpec, evenly_spaced_sites

ENV_PREFIX = "GOTTO_"
EXPERIMENTS = ("thermalize", "cone", "otto", "correlations", "scaling")


class ConfigError(InvalidArgument):
    pass


def _float_list(text: str) -> list[float]:
    """``"1,2,5"`` or a range ``"start:stop:step"`` (stop included when hit)."""
    text = text.strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ConfigError(f"bad range {text!r}; expected start:stop:step with step > 0")
        start, stop, step = parts
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(max(n, 0))]
    return [float(p) for p in text.split(",") if p.strip()]


def _int_list(text: str) -> list[int]:
    out = _float_list(text)
    if any(v != int(v) for v in out):
        raise ConfigError(f"expected integers in {text!r}")
    return [int(v) for v in out]


def _bool(text: str) -> bool:
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _opt_float(text: str) -> float | None:
    return None if text.strip().lower() in ("", "none") else float(text)


@dataclass
class Manifest:
    """Every tunable of every experiment; unused keys are ignored by a given runner."""

    n_hot: int = 30
    omega_h: float = 2.0
    alpha_h: float = 0.1
    T_h: float = 4.0
    n_cold: int = 30
    omega_c: float = 1.0
    alpha_c: float = 0.1
    T_c: float = 0.5
    gamma: float | None = None
    sites: int = 1
    tau: float = 100.0
    delta: float | None = None
    delta_ratio: float = 0.1
    n_cycles: int = 1
    adiabat_mode: str = "instantaneous"
    tau_ad: float = 0.0
    dt: float = 1e-3
    check_interval: int = 1000
    tol_symp: float = 1e-8
    T_m: float = 0.5
    omega_m: float | None = None
    trace_dt: float = 1.0
    trace_stride: int = 1
    traces: bool = False
    n_list: list[int] = field(default_factory=lambda: [10, 20, 30])
    tau_list: list[float] = field(default_factory=lambda: [20.0, 40.0, 60.0, 80.0, 100.0])
    alpha_list: list[float] = field(default_factory=lambda: [0.05, 0.1, 0.2])
    snapshot_times: list[float] = field(default_factory=list)

    def __post_init__(self):
        if self.trace_stride < 1:
            raise ConfigError("trace_stride must be >= 1")
        if not self.trace_dt > 0:
            raise ConfigError("trace_dt must be positive")
        if self.adiabat_mode not in ADIABAT_MODES:
            raise ConfigError(f"adiabat_mode must be one of {ADIABAT_MODES}")
        for name in ("n_list", "tau_list", "alpha_list"):
            if not getattr(self, name):
                raise ConfigError(f"{name} must not be empty")
        if not 0 < self.delta_ratio <= 0.5:
            raise ConfigError("delta_ratio must lie in (0, 0.5]")

    @property
    def coupling_gamma(self) -> float:
        # resonance default: match the intra-ring coupling
        return self.alpha_h if self.gamma is None else self.gamma

    @property
    def wm_omega(self) -> float:
        return self.omega_h if self.omega_m is None else self.omega_m

    def delta_for(self, tau: float) -> float:
        return self.delta if self.delta is not None else self.delta_ratio * tau

    def profile(self, tau: float | None = None) -> SwitchingProfile:
        tau = self.tau if tau is None else tau
        return SwitchingProfile(tau, self.delta_for(tau))

    def controls(self) -> IntegratorControls:
        return IntegratorControls(self.dt, self.check_interval, self.tol_symp)

    def coupling(self, n_nodes: int | None = None) -> CouplingSpec:
        n = self.n_hot if n_nodes is None else n_nodes
        return CouplingSpec(self.coupling_gamma, evenly_spaced_sites(n, self.sites))

    def hot_bath(self, n_nodes: int | None = None, alpha: float | None = None) -> BathSpec:
        return BathSpec(
            self.n_hot if n_nodes is None else n_nodes,
            self.omega_h,
            self.alpha_h if alpha is None else alpha,
            self.T_h,
        )

    def working_medium(self) -> WorkingMediumSpec:
        return WorkingMediumSpec(self.wm_omega, self.T_m)

    def engine_config(self, tau: float | None = None, alpha: float | None = None) -> EngineConfig:
        if self.n_hot != self.n_cold and self.sites > 1:
            raise ConfigError("multi-site coupling needs baths of equal size")
        gamma = self.coupling_gamma if alpha is None else alpha
        return EngineConfig(
            hot=BathSpec(self.n_hot, self.omega_h, self.alpha_h if alpha is None else alpha, self.T_h),
            cold=BathSpec(self.n_cold, self.omega_c, self.alpha_c if alpha is None else alpha, self.T_c),
            coupling=CouplingSpec(gamma, evenly_spaced_sites(min(self.n_hot, self.n_cold), self.sites)),
            profile=self.profile(tau),
            n_cycles=self.n_cycles,
            adiabat_mode=self.adiabat_mode,
            tau_ad=self.tau_ad,
            controls=self.controls(),
        )

    def as_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


_PARSERS = {
    int: int,
    float: float,
    bool: _bool,
    str: str,
    "float | None": _opt_float,
    "list[int]": _int_list,
    "list[float]": _float_list,
}


def _parser_for(f: dataclasses.Field):
    t = f.type
    if isinstance(t, str):
        return _PARSERS.get(t) or _PARSERS[{"int": int, "float": float, "bool": bool, "str": str}[t]]
    return _PARSERS[t]


FIELDS = {f.name: f for f in dataclasses.fields(Manifest)}


def parse_values(raw: Mapping[str, str], source: str) -> dict[str, Any]:
    out = {}
    for key, text in raw.items():
        if key not in FIELDS:
            raise ConfigError(f"{source}: unknown key {key!r}")
        try:
            out[key] = _parser_for(FIELDS[key])(text)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"{source}: cannot parse {key} = {text!r} ({exc})") from None
    return out


def read_config_file(path: str | os.PathLike) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` and ``;`` start comments."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string("[manifest]\n" + text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    return dict(parser["manifest"])


def env_values(environ: Mapping[str, str] | None = None) -> dict[str, str]:
    environ = os.environ if environ is None else environ
    out = {}
    for name in FIELDS:
        key = ENV_PREFIX + name.upper()
        if key in environ:
            out[name] = environ[key]
    return out


def resolve_manifest(
    path: str | os.PathLike | None = None,
    overrides: Mapping[str, str] | None = None,
    environ: Mapping[str, str] | None = None,
) -> Manifest:
    values: dict[str, Any] = {}
    if path is not None:
        values.update(parse_values(read_config_file(path), str(path)))
    values.update(parse_values(env_values(environ), "environment"))
    values.update(parse_values(overrides or {}, "command line"))
    try:
        return Manifest(**values)
    except InvalidArgument as exc:
        raise ConfigError(str(exc)) from None


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj
