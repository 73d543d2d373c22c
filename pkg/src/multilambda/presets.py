"""Ready-made run configurations covering the package's canonical scenarios.

Each preset is a complete config file text.  Width scans sweep the pulse
duration at fixed parameters; detuning scans shift all detunings by a
common offset; time presets are single runs whose CSV row summarizes the
transfer.  The N=5 coupling constants were drawn once from a seeded
uniform generator on [0.5, 1.5] and frozen here as literals.
"""

from __future__ import annotations

from .errors import ValidationError

__all__ = ["PRESETS", "preset_names", "preset_text"]


def _widths_scan(comment: str, system: str, start: float, stop: float, points: int, name: str) -> str:
    return f"""# {comment}
[system]
{system}

[pulses]
omega0 = 1

[scan]
axis = pulse_width
start = {start:g}
stop = {stop:g}
points = {points}

[output]
csv = {name}.csv
report = {name}.txt
"""


def _single_run(comment: str, system: str, width: float, name: str) -> str:
    return f"""# {comment}
[system]
{system}

[pulses]
omega0 = 1
width = {width:g}

[output]
csv = {name}.csv
report = {name}.txt
"""


def _detuning_scan(
    comment: str, system: str, width: float, start: float, stop: float, points: int, name: str
) -> str:
    return f"""# {comment}
[system]
{system}

[pulses]
omega0 = 1
width = {width:g}

[scan]
axis = common_detuning
start = {start:g}
stop = {stop:g}
points = {points}

[output]
csv = {name}.csv
report = {name}.txt
"""


_N3_DARK = """alphas = 1, 1, 1
betas = 1, 1, 1
detunings = 1, 2, 3"""

_N3_TRANSFER = """alphas = 1, 1, 1
betas = 1, 2, 1
detunings = 1, 2, -1"""

_N3_DOUBLE_ZERO = """alphas = 1, 1, 1
betas = 1, 1, 1
detunings = 1, 2, -2/3"""

_N3_BLOCKED = """alphas = 1, 4, 2
betas = 1, 1, 1
detunings = 1, 2, -2/3"""

_N2_LINKED = """alphas = 1, 2
betas = 1, 0.5
detunings = 0.5, 1.5"""

_N2_BROKEN = """alphas = 1, 2
betas = 1, 0.5
detunings = -0.5, 0.5"""

_N2_RESONANT_BASE = """alphas = 1, 2
betas = 1, 0.5
detunings = 0, 1"""

_RES_DARK = """alphas = 1, 0.5
betas = 1, 0.5
detunings = 0, 1"""

_RES_GENERAL = """alphas = 1, 2
betas = 1, 0.5
detunings = 0, 1"""

_N5_RANDOM = """alphas = 1, 0.8270, 1.4873, 0.8187, 1.2885
betas = 1, 1.3699, 0.8911, 0.9379, 0.8727
detunings = 0, 1, 2, 3, 4"""

_LZ_COUPLINGS = "alphas = 1, 0.6, 1.2\nbetas = 1, 1, 0.6"

PRESETS: dict[str, str] = {
    "n3_dark_widths": _widths_scan(
        "Proportional N=3 couplings: dark state carries the transfer.",
        _N3_DARK, 2, 80, 40, "n3_dark_widths",
    ),
    "n3_transfer_state_widths": _widths_scan(
        "N=3 with vanishing zero-eigenvalue residual: general transfer state.",
        _N3_TRANSFER, 2, 80, 40, "n3_transfer_state_widths",
    ),
    "n3_double_zero_widths": _widths_scan(
        "Proportional N=3 with all detuning sums zero: doubly degenerate"
        " trapped state, transfer saturates below one.",
        _N3_DOUBLE_ZERO, 2, 80, 40, "n3_double_zero_widths",
    ),
    "n3_blocked_widths": _widths_scan(
        "N=3 with a vanishing Stokes detuning sum: no transfer state.",
        _N3_BLOCKED, 2, 80, 40, "n3_blocked_widths",
    ),
    "n2_linked_widths": _widths_scan(
        "N=2 off-resonant, detuning sums share a sign: transfer converges.",
        _N2_LINKED, 2, 80, 40, "n2_linked_widths",
    ),
    "n2_broken_widths": _widths_scan(
        "N=2 off-resonant, detuning sums of opposite sign: transfer dies off.",
        _N2_BROKEN, 2, 80, 40, "n2_broken_widths",
    ),
    "resonant_dark_widths": _widths_scan(
        "One resonant state, proportional couplings: dark-state transfer.",
        _RES_DARK, 2, 80, 40, "resonant_dark_widths",
    ),
    "resonant_general_widths": _widths_scan(
        "One resonant state, non-proportional couplings: general transfer state.",
        _RES_GENERAL, 2, 80, 40, "resonant_general_widths",
    ),
    "lz_xi_zero_widths": _widths_scan(
        "Cross detuning sum exactly zero: slowest approach to adiabaticity.",
        _LZ_COUPLINGS + "\ndetunings = -25/24, 1, 2", 2, 40, 39, "lz_xi_zero_widths",
    ),
    "lz_xi_small_widths": _widths_scan(
        "Small avoided-crossing parameter: slow approach to adiabaticity.",
        _LZ_COUPLINGS + "\ndetunings = -2, 1, 2", 2, 40, 39, "lz_xi_small_widths",
    ),
    "lz_xi_large_widths": _widths_scan(
        "Large avoided-crossing parameter: fast approach to adiabaticity.",
        _LZ_COUPLINGS + "\ndetunings = -0.5, -1.5, -2.5", 2, 40, 39, "lz_xi_large_widths",
    ),
    "n3_dark_time": _single_run(
        "Single adiabatic run of the proportional N=3 system.",
        _N3_DARK, 30, "n3_dark_time",
    ),
    "n3_transfer_state_time": _single_run(
        "Single adiabatic run of the N=3 general-transfer-state system.",
        _N3_TRANSFER, 30, "n3_transfer_state_time",
    ),
    "n2_linked_time": _single_run(
        "Single run of the N=2 system whose eigenvalue curve links i to f.",
        _N2_LINKED, 30, "n2_linked_time",
    ),
    "n2_broken_time": _single_run(
        "Single run of the N=2 system whose eigenvalue curve returns to i.",
        _N2_BROKEN, 30, "n2_broken_time",
    ),
    "resonant_dark_time": _single_run(
        "Single resonant run, proportional couplings: intermediate states stay empty.",
        _RES_DARK, 80, "resonant_dark_time",
    ),
    "resonant_general_time": _single_run(
        "Single resonant run, non-proportional couplings: transient intermediate population.",
        _RES_GENERAL, 80, "resonant_general_time",
    ),
    "n2_detuning_scan_t20": _detuning_scan(
        "Common-detuning sweep of the N=2 system, moderate pulse area.",
        _N2_RESONANT_BASE, 20, -2, 1, 301, "n2_detuning_scan_t20",
    ),
    "n2_detuning_scan_t80": _detuning_scan(
        "Common-detuning sweep of the N=2 system, large pulse area.",
        _N2_RESONANT_BASE, 80, -2, 1, 301, "n2_detuning_scan_t80",
    ),
    "n5_detuning_scan_t20": _detuning_scan(
        "Common-detuning sweep across an N=5 manifold, moderate pulse area.",
        _N5_RANDOM, 20, -6, 2, 241, "n5_detuning_scan_t20",
    ),
    "n5_detuning_scan_t80": _detuning_scan(
        "Common-detuning sweep across an N=5 manifold, large pulse area.",
        _N5_RANDOM, 80, -6, 2, 241, "n5_detuning_scan_t80",
    ),
}


def preset_names() -> list[str]:
    return sorted(PRESETS)


def preset_text(name: str) -> str:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(preset_names())
        raise ValidationError(f"unknown preset {name!r}; available: {known}") from None
