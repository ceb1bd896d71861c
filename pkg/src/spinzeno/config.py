"""Run-configuration parsing for the command-line front end.

Configs are INI documents with three sections::

    [system]
    epsilon = 1.0       ; level splitting
    delta = 0.2         ; tunneling amplitude
    beta = inf          ; optional inverse temperature (default: zero T)

    [bath]
    g = 1.0             ; dimensionless coupling strength
    s = 3.0             ; Ohmicity (default 3)
    omega_c = 10.0      ; cutoff frequency
    modes = 1.0:0.2 3.0:0.3   ; alternative: explicit discrete modes

    [run]
    modes = full, small_delta
    tau = 1.0           ; single point (compute)
    tau_min = 0.05
    tau_max = 3.0
    tau_points = 50
    spacing = geometric
    sweep = g: 0.01 0.05 0.5 0.95
    tol = 1e-8
    kernel_tol = 1e-10
    n_max = 6           ; Fock truncation for oracle-check

Unknown keys, missing required keys and non-numeric values are rejected
with the offending key and line number.
"""

import configparser
import math
from dataclasses import dataclass, field

from .bath import DiscreteBath, SpectralDensity
from .errors import ConfigError
from .polaron import SystemParams
from .survival import SurvivalMode

DEFAULTS = {"s": 3.0, "tol": 1e-8, "kernel_tol": 1e-10, "tau_points": 50,
            "spacing": "geometric", "n_max": 6}

_KNOWN_KEYS = {
    "system": {"epsilon", "delta", "beta"},
    "bath": {"g", "s", "omega_c", "modes"},
    "run": {"modes", "tau", "tau_min", "tau_max", "tau_points", "spacing",
            "sweep", "tol", "kernel_tol", "n_max"},
}

VALIDITY_WARN_THRESHOLD = 0.1


@dataclass(frozen=True)
class RunConfig:
    system: SystemParams
    source: object            # SpectralDensity or DiscreteBath
    modes: tuple              # SurvivalMode values, order preserved
    tau: float = None         # single point, for `compute`
    tau_min: float = None
    tau_max: float = None
    tau_points: int = DEFAULTS["tau_points"]
    spacing: str = DEFAULTS["spacing"]
    sweep_key: str = None
    sweep_values: tuple = ()
    tol: float = DEFAULTS["tol"]
    kernel_tol: float = DEFAULTS["kernel_tol"]
    n_max: int = DEFAULTS["n_max"]
    notes: tuple = field(default_factory=tuple, compare=False)
    echo: tuple = ()          # (key, value-string) pairs for output headers


def _line_of(text, section, key):
    """Best-effort line number of `key` inside `section` for error messages."""
    current = None
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
        elif current == section and line.split("=")[0].split(":")[0].strip() == key:
            return i
    return None


def _fail(text, section, key, reason):
    line = _line_of(text, section, key)
    where = f" (line {line})" if line else ""
    raise ConfigError(f"[{section}] {key}{where}: {reason}")


def _number(text, section, raw, key):
    try:
        return float(raw)
    except ValueError:
        _fail(text, section, key, f"non-numeric value {raw!r}")


def parse_config(text):
    """Parse and validate an INI run configuration."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc

    for section in parser.sections():
        name = section.lower()
        if name not in _KNOWN_KEYS:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _KNOWN_KEYS[name]:
                _fail(text, name, key, "unknown key")

    def get(section, key, default=None):
        if parser.has_option(section, key):
            return parser.get(section, key)
        return default

    def get_num(section, key, default=None, required=False):
        raw = get(section, key)
        if raw is None:
            if required:
                raise ConfigError(f"[{section}] missing required key {key!r}")
            return default
        return _number(text, section, raw, key)

    if not parser.has_section("system"):
        raise ConfigError("missing required section [system]")
    if not parser.has_section("bath"):
        raise ConfigError("missing required section [bath]")

    epsilon = get_num("system", "epsilon", required=True)
    delta = get_num("system", "delta", required=True)
    beta_raw = get("system", "beta")
    beta = None
    if beta_raw is not None and beta_raw.strip().lower() not in ("inf", "infinity"):
        beta = _number(text, "system", beta_raw, "beta")
        if beta <= 0.0:
            _fail(text, "system", "beta", "must be positive (or inf)")
    system = SystemParams(epsilon, delta, beta)

    notes = []
    modes_raw = get("bath", "modes")
    if modes_raw is not None:
        pairs = []
        for token in modes_raw.replace(",", " ").split():
            if ":" not in token:
                _fail(text, "bath", "modes", f"mode {token!r} is not omega:g")
            w_raw, g_raw = token.split(":", 1)
            pairs.append((_number(text, "bath", w_raw, "modes"),
                          _number(text, "bath", g_raw, "modes")))
        source = DiscreteBath(tuple(pairs))
    else:
        g = get_num("bath", "g", required=True)
        s = get_num("bath", "s", DEFAULTS["s"])
        omega_c = get_num("bath", "omega_c", required=True)
        source = SpectralDensity(G=g, s=s, omega_c=omega_c)
        if s <= 1.0:
            notes.append("note: bath is Ohmic/sub-Ohmic (B = 0), so the full "
                         "mode coincides with the small-delta mode")

    mode_names = get("run", "modes", "full") if parser.has_section("run") else "full"
    modes = []
    for token in mode_names.replace(",", " ").split():
        try:
            modes.append(SurvivalMode(token.strip().lower()))
        except ValueError:
            _fail(text, "run", "modes", f"unknown mode {token!r}")
    if not modes:
        raise ConfigError("[run] modes: at least one mode required")

    tau = get_num("run", "tau") if parser.has_section("run") else None
    tau_min = get_num("run", "tau_min") if parser.has_section("run") else None
    tau_max = get_num("run", "tau_max") if parser.has_section("run") else None
    tau_points = int(get_num("run", "tau_points", DEFAULTS["tau_points"])) \
        if parser.has_section("run") else DEFAULTS["tau_points"]
    spacing = get("run", "spacing", DEFAULTS["spacing"]) \
        if parser.has_section("run") else DEFAULTS["spacing"]
    if spacing not in ("geometric", "linear"):
        _fail(text, "run", "spacing", f"must be geometric or linear, got {spacing!r}")
    tol = get_num("run", "tol", DEFAULTS["tol"]) \
        if parser.has_section("run") else DEFAULTS["tol"]
    kernel_tol = get_num("run", "kernel_tol", DEFAULTS["kernel_tol"]) \
        if parser.has_section("run") else DEFAULTS["kernel_tol"]
    n_max = int(get_num("run", "n_max", DEFAULTS["n_max"])) \
        if parser.has_section("run") else DEFAULTS["n_max"]

    sweep_key, sweep_values = None, ()
    sweep_raw = get("run", "sweep") if parser.has_section("run") else None
    if sweep_raw is not None:
        if ":" not in sweep_raw:
            _fail(text, "run", "sweep", "expected 'key: v1 v2 ...'")
        sweep_key, values_raw = sweep_raw.split(":", 1)
        sweep_key = sweep_key.strip().lower()
        if sweep_key not in ("g", "s", "omega_c", "epsilon", "delta"):
            _fail(text, "run", "sweep", f"cannot sweep {sweep_key!r}")
        sweep_values = tuple(_number(text, "run", v, "sweep")
                             for v in values_raw.replace(",", " ").split())
        if not sweep_values:
            _fail(text, "run", "sweep", "no sweep values given")
        if not all(math.isfinite(v) for v in sweep_values):
            _fail(text, "run", "sweep", "sweep values must be finite")

    echo = []
    echo.append(("system.epsilon", repr(epsilon)))
    echo.append(("system.delta", repr(delta)))
    echo.append(("system.beta", "inf" if beta is None else repr(beta)))
    if isinstance(source, DiscreteBath):
        echo.append(("bath.modes", " ".join(
            f"{w!r}:{gk!r}" for w, gk in source.modes)))
    else:
        echo.append(("bath.g", repr(source.G)))
        echo.append(("bath.s", repr(source.s)))
        echo.append(("bath.omega_c", repr(source.omega_c)))
    echo.append(("run.modes", " ".join(m.value for m in modes)))
    for key, val in (("tau", tau), ("tau_min", tau_min), ("tau_max", tau_max)):
        if val is not None:
            echo.append((f"run.{key}", repr(val)))
    echo.append(("run.tau_points", str(tau_points)))
    echo.append(("run.spacing", spacing))
    if sweep_key:
        echo.append(("run.sweep", f"{sweep_key}: "
                     + " ".join(repr(v) for v in sweep_values)))
    echo.append(("run.tol", repr(tol)))
    echo.append(("run.kernel_tol", repr(kernel_tol)))
    echo.append(("run.n_max", str(n_max)))

    return RunConfig(system=system, source=source, modes=tuple(modes),
                     tau=tau, tau_min=tau_min, tau_max=tau_max,
                     tau_points=tau_points, spacing=spacing,
                     sweep_key=sweep_key, sweep_values=sweep_values,
                     tol=tol, kernel_tol=kernel_tol, n_max=n_max,
                     notes=tuple(notes), echo=tuple(echo))


def apply_sweep(cfg, value):
    """System/bath objects with the sweep variable replaced by `value`."""
    system, source = cfg.system, cfg.source
    if cfg.sweep_key in ("epsilon", "delta"):
        kwargs = {"epsilon": system.epsilon, "delta": system.delta,
                  "beta": system.beta}
        kwargs[cfg.sweep_key] = value
        system = SystemParams(**kwargs)
    elif cfg.sweep_key is not None:
        if isinstance(source, DiscreteBath):
            raise ConfigError("cannot sweep spectral-density parameters of "
                              "a discrete bath")
        kwargs = {"G": source.G, "s": source.s, "omega_c": source.omega_c}
        kwargs[{"g": "G"}.get(cfg.sweep_key, cfg.sweep_key)] = value
        source = SpectralDensity(**kwargs)
    return system, source
