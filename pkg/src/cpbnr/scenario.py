"""Scenario configuration: figure presets and the ``key = value`` file format.

A config file is a flat list of ``key = value`` lines; ``#`` starts a comment.
Every key is optional and falls back to the defaults of :class:`ScenarioConfig`.
Frequencies and times are in units of lambda_0.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from .dynamics import Gauge, IntegratorConfig
from .model import ModulationKind, ModulationLaw, SystemParams


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class ScenarioConfig:
    params: SystemParams = field(default_factory=SystemParams)
    law: ModulationLaw = field(default_factory=ModulationLaw.constant)
    alpha: complex = 5.0
    n_max: int | None = None
    tail_tolerance: float = 1e-12
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    entropy_renormalize: bool = False
    out: str | None = None
    metrics: str | None = None
    plot_script: str | None = None


@dataclass(frozen=True)
class Preset:
    name: str
    figure: str
    observable: str
    config: ScenarioConfig


FIGURE_OMEGA = 20000.0
INVERSION_T_END = 50.0
ENTROPY_T_END = 120.0


def _panel(name, figure, observable, kappa, delta, omega_prime=None):
    modulated = omega_prime is not None
    params = SystemParams(
        omega0=FIGURE_OMEGA,
        omega_c=FIGURE_OMEGA,
        chi0=0.2,
        kappa=kappa,
        delta=delta,
        epsilon=0.001 if modulated else 0.0,
    )
    law = ModulationLaw.sinusoidal(10.0, omega_prime) if modulated else ModulationLaw.constant()
    t_end = INVERSION_T_END if observable == "inversion" else ENTROPY_T_END
    cfg = ScenarioConfig(params=params, law=law, alpha=5.0, integrator=IntegratorConfig(t_end=t_end))
    return Preset(name, figure, observable, cfg)


def _build_presets():
    panels = []
    for fig, observable, modulated in (
        (2, "inversion", False),
        (3, "inversion", True),
        (4, "entropy", False),
        (5, "entropy", True),
    ):
        if modulated:
            rows = (("a", 0.01, 0.0, 1.0), ("b", 0.01, 0.0, 20.0), ("c", 0.0, 0.01, 20.0))
        else:
            rows = (("a", 0.0, 0.0, None), ("b", 0.01, 0.0, None), ("c", 0.0, 0.01, None))
        for panel, kappa, delta, wp in rows:
            panels.append(
                _panel(f"fig{fig}{panel}", f"Fig. {fig}({panel})", observable, kappa, delta, wp)
            )
    return {p.name: p for p in panels}


PRESETS = _build_presets()


def describe(cfg: ScenarioConfig) -> str:
    p, law = cfg.params, cfg.law
    parts = [
        f"nbar={abs(cfg.alpha) ** 2:g}",
        f"w0={p.omega0:g}",
        f"wc={p.omega_c:g}",
        f"chi0={p.chi0:g}",
        f"kappa={p.kappa:g}",
        f"delta={p.delta:g}",
    ]
    if law.kind is ModulationKind.SINUSOIDAL:
        parts += [f"f=tau*sin(w't)", f"tau={law.tau:g}", f"w'={law.omega_prime:g}", f"eps={p.epsilon:g}"]
    else:
        parts.append("f=0")
    parts.append(f"t_end={cfg.integrator.t_end:g}")
    return " ".join(parts)


def list_presets() -> str:
    lines = [f"{'name':<7} {'figure':<10} {'observable':<10} parameters"]
    for p in PRESETS.values():
        lines.append(f"{p.name:<7} {p.figure:<10} {p.observable:<10} {describe(p.config)}")
    return "\n".join(lines)


# key -> (section, attribute); section None means a top-level ScenarioConfig field
_KEYS = {
    "omega0": ("params", "omega0"),
    "omega_c": ("params", "omega_c"),
    "chi0": ("params", "chi0"),
    "kappa": ("params", "kappa"),
    "delta": ("params", "delta"),
    "epsilon": ("params", "epsilon"),
    "coupling_scale": ("params", "coupling_scale"),
    "modulation": ("law", "kind"),
    "tau": ("law", "tau"),
    "omega_prime": ("law", "omega_prime"),
    "alpha": (None, "alpha"),
    "n_max": (None, "n_max"),
    "tail_tolerance": (None, "tail_tolerance"),
    "rtol": ("integrator", "rtol"),
    "atol": ("integrator", "atol"),
    "t_end": ("integrator", "t_end"),
    "stride": ("integrator", "output_stride"),
    "gauge": ("integrator", "gauge"),
    "method": ("integrator", "method"),
    "threads": ("integrator", "threads"),
    "max_steps": ("integrator", "max_steps"),
    "entropy_renormalize": (None, "entropy_renormalize"),
    "out": (None, "out"),
    "metrics": (None, "metrics"),
    "plot_script": (None, "plot_script"),
}

_PATH_KEYS = ("out", "metrics", "plot_script")
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _convert(key: str, text: str):
    low = text.lower()
    if key == "modulation":
        return ModulationKind(low)
    if key == "gauge":
        return Gauge(low)
    if key in _PATH_KEYS:
        return text or None
    if key in ("method", "n_max") and low == "auto":
        return None
    if key == "method":
        return text
    if key in ("n_max", "threads", "max_steps"):
        return int(text)
    if key == "alpha":
        return complex(text.replace(" ", ""))
    if key == "entropy_renormalize":
        if low in _TRUE:
            return True
        if low in _FALSE:
            return False
        raise ValueError(f"expected a boolean, got {text!r}")
    return float(text)


def with_overrides(cfg: ScenarioConfig, values: dict) -> ScenarioConfig:
    """Return ``cfg`` with already-converted ``{key: value}`` overrides applied."""
    grouped = {"params": {}, "law": {}, "integrator": {}, None: {}}
    for key, value in values.items():
        section, attr = _KEYS[key]
        grouped[section][attr] = value
    return dataclasses.replace(
        cfg,
        params=dataclasses.replace(cfg.params, **grouped["params"]),
        law=dataclasses.replace(cfg.law, **grouped["law"]),
        integrator=dataclasses.replace(cfg.integrator, **grouped["integrator"]),
        **grouped[None],
    )


def parse_config(text: str, base: ScenarioConfig | None = None) -> ScenarioConfig:
    """Parse ``key = value`` text; errors carry the offending line number."""
    cfg = base or ScenarioConfig()
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        try:
            values[key] = _convert(key, value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", lineno) from None
        try:
            cfg = with_overrides(cfg, {key: values[key]})
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid setting {key} = {value}: {exc}", lineno) from None
    return cfg


def _fmt(value) -> str:
    if value is None:
        return "auto"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, complex):
        return repr(value.real) if value.imag == 0 else repr(value).strip("()")
    if hasattr(value, "value"):
        return value.value
    return repr(value) if isinstance(value, float) else str(value)


def dump_config(cfg: ScenarioConfig) -> str:
    """Serialize every key; ``parse_config(dump_config(c)) == c``."""
    lines = []
    for key, (section, attr) in _KEYS.items():
        owner = cfg if section is None else getattr(cfg, section)
        value = getattr(owner, attr)
        if key in _PATH_KEYS:
            lines.append(f"{key} = {value or ''}".rstrip())
        else:
            lines.append(f"{key} = {_fmt(value)}")
    return "\n".join(lines) + "\n"
