"""Run configuration: a small sectioned key-value text format.

A config file drives one simulation or one scan.  Sections are bracketed
headers; entries are `key = value` lines; `#` starts a comment.  Unknown
sections or keys are parse errors so that typos cannot silently fall back
to defaults.  Values may be numbers, fractions like -2/3 (kept exact to
double precision, which matters for constructing exactly-vanishing
detuning sums), booleans, or comma-separated number lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .dynamics import IntegratorConfig
from .errors import ParseError, ValidationError
from .model import MultiLambdaSystem, PulsePair, PulseShape

__all__ = [
    "ScanAxis",
    "ScanSpec",
    "OutputSpec",
    "RunConfig",
    "parse_config",
    "load_config",
]

_SECTION_KEYS = {
    "system": {"n", "alphas", "betas", "detunings"},
    "pulses": {"omega0", "width", "delay", "shape"},
    "integrator": {"rel_tol", "abs_tol", "t_start", "t_end", "max_step", "store_every"},
    "scan": {"axis", "start", "stop", "points", "log_scale"},
    "output": {"csv", "report"},
}


class ScanAxis(Enum):
    PULSE_WIDTH = "pulse_width"
    COMMON_DETUNING = "common_detuning"


@dataclass(frozen=True)
class ScanSpec:
    axis: ScanAxis
    start: float
    stop: float
    points: int
    log_scale: bool = False

    def values(self) -> np.ndarray:
        if self.log_scale:
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class OutputSpec:
    csv_path: Path | None = None
    report_path: Path | None = None


@dataclass(frozen=True)
class RunConfig:
    system: MultiLambdaSystem
    pulses: PulsePair
    integrator: IntegratorConfig
    scan: ScanSpec | None
    output: OutputSpec


def _parse_scalar(text: str, line: int, source: str) -> float:
    """Float literal, allowing a/b fractions for exact rational detunings."""
    text = text.strip()
    try:
        if "/" in text:
            num, _, den = text.partition("/")
            return float(num) / float(den)
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a number: {text!r}", line=line, source=source) from None


def _parse_list(text: str, line: int, source: str) -> tuple[float, ...]:
    items = [piece for piece in text.split(",") if piece.strip()]
    if not items:
        raise ParseError("empty list", line=line, source=source)
    return tuple(_parse_scalar(piece, line, source) for piece in items)


def _parse_int(text: str, line: int, source: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ParseError(f"not an integer: {text.strip()!r}", line=line, source=source) from None


def _parse_bool(text: str, line: int, source: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ParseError(f"not a boolean: {text.strip()!r}", line=line, source=source)


def _split_sections(text: str, source: str) -> dict[str, dict[str, tuple[str, int]]]:
    """Raw section -> key -> (value text, line number) with syntax checking."""
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in _SECTION_KEYS:
                raise ParseError(f"unknown section [{name}]", line=lineno, source=source)
            if name in sections:
                raise ParseError(f"duplicate section [{name}]", line=lineno, source=source)
            sections[name] = {}
            current = name
            continue
        if "=" not in line:
            raise ParseError("expected key = value", line=lineno, source=source)
        if current is None:
            raise ParseError("entry before any section header", line=lineno, source=source)
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _SECTION_KEYS[current]:
            raise ParseError(f"unknown key {key!r} in [{current}]", line=lineno, source=source)
        if key in sections[current]:
            raise ParseError(f"duplicate key {key!r}", line=lineno, source=source)
        sections[current][key] = (value.strip(), lineno)
    return sections


def parse_config(text: str, source: str = "<string>", base_dir: Path | None = None) -> RunConfig:
    """Parse config text into a validated RunConfig.

    Relative output paths are resolved against ``base_dir`` (the config
    file's directory when loaded from disk).
    """
    sections = _split_sections(text, source)

    sys_keys = sections.get("system")
    if sys_keys is None:
        raise ValidationError("missing [system] section")
    for required in ("alphas", "betas", "detunings"):
        if required not in sys_keys:
            raise ValidationError(f"[system] needs key {required!r}")
    alphas = _parse_list(*_at(sys_keys, "alphas", source))
    betas = _parse_list(*_at(sys_keys, "betas", source))
    detunings = _parse_list(*_at(sys_keys, "detunings", source))
    if "n" in sys_keys:
        n = _parse_int(*_at(sys_keys, "n", source))
        for name, values in (("alphas", alphas), ("betas", betas), ("detunings", detunings)):
            if len(values) != n:
                raise ValidationError(f"{name} has {len(values)} entries, n = {n}")
    if not (len(alphas) == len(betas) == len(detunings)):
        raise ValidationError(
            f"coupling/detuning lengths differ: {len(alphas)}, {len(betas)}, {len(detunings)}"
        )
    try:
        system = MultiLambdaSystem(alphas=alphas, betas=betas, detunings=detunings)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None

    pul_keys = sections.get("pulses", {})
    omega0 = _parse_scalar(*_at(pul_keys, "omega0", source)) if "omega0" in pul_keys else 1.0
    width = _parse_scalar(*_at(pul_keys, "width", source)) if "width" in pul_keys else 30.0
    if "delay" in pul_keys:
        delay = _parse_scalar(*_at(pul_keys, "delay", source))
    else:
        delay = 0.5 * width
    if "shape" in pul_keys:
        shape_text = pul_keys["shape"][0]
        try:
            shape = PulseShape(shape_text)
        except ValueError:
            raise ValidationError(f"unsupported pulse shape {shape_text!r}") from None
    else:
        shape = PulseShape.GAUSSIAN
    if omega0 <= 0:
        raise ValidationError("omega0 must be positive")
    try:
        pulses = PulsePair(omega0=omega0, width=width, delay=delay, shape=shape)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None

    int_keys = sections.get("integrator", {})
    int_kwargs: dict[str, object] = {}
    for key in ("rel_tol", "abs_tol", "t_start", "t_end", "max_step"):
        if key in int_keys:
            int_kwargs[key] = _parse_scalar(*_at(int_keys, key, source))
    if "store_every" in int_keys:
        int_kwargs["store_every"] = _parse_int(*_at(int_keys, "store_every", source))
    try:
        integrator = IntegratorConfig(**int_kwargs)  # type: ignore[arg-type]
    except ValueError as exc:
        raise ValidationError(str(exc)) from None

    scan: ScanSpec | None = None
    if "scan" in sections:
        scan_keys = sections["scan"]
        for required in ("axis", "start", "stop", "points"):
            if required not in scan_keys:
                raise ValidationError(f"[scan] needs key {required!r}")
        axis_text = scan_keys["axis"][0]
        try:
            axis = ScanAxis(axis_text)
        except ValueError:
            raise ValidationError(f"unknown scan axis {axis_text!r}") from None
        start = _parse_scalar(*_at(scan_keys, "start", source))
        stop = _parse_scalar(*_at(scan_keys, "stop", source))
        points = _parse_int(*_at(scan_keys, "points", source))
        log_scale = (
            _parse_bool(*_at(scan_keys, "log_scale", source)) if "log_scale" in scan_keys else False
        )
        if points < 2:
            raise ValidationError("scan needs points >= 2")
        if log_scale and (start <= 0 or stop <= 0):
            raise ValidationError("log-scale scan needs positive endpoints")
        if axis is ScanAxis.PULSE_WIDTH and (start <= 0 or stop <= 0):
            raise ValidationError("pulse-width scan needs positive widths")
        scan = ScanSpec(axis=axis, start=start, stop=stop, points=points, log_scale=log_scale)

    out_keys = sections.get("output", {})
    root = base_dir if base_dir is not None else Path.cwd()

    def _path(key: str) -> Path | None:
        if key not in out_keys:
            return None
        p = Path(out_keys[key][0])
        return p if p.is_absolute() else root / p

    output = OutputSpec(csv_path=_path("csv"), report_path=_path("report"))
    return RunConfig(system=system, pulses=pulses, integrator=integrator, scan=scan, output=output)


def _at(keys: dict[str, tuple[str, int]], key: str, source: str) -> tuple[str, int, str]:
    value, line = keys[key]
    return value, line, source


def load_config(path: str | Path) -> RunConfig:
    """Read and parse a config file; parse errors carry the file name."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config {p}: {exc.strerror}") from None
    return parse_config(text, source=str(p), base_dir=p.parent)
