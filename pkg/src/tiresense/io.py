"""File formats: scenario JSON, trace CSV with JSON sidecar, model files,
estimate tables, reports and plot data.

Every file this package writes names its schema version; readers reject
unknown versions rather than guessing.  All numeric formatting is fixed so
identical inputs produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .errors import SchemaError
from .estimation import LoadSurfaceModel, PatchLoadModel, SlipModel
from .scenario import SensorSpec, TireScenario
from .simulate import AccelTrace, GroundTruth

TRACE_SCHEMA = "tiresense.trace.v1"
SIDECAR_SCHEMA = "tiresense.sidecar.v1"
LOAD_MODEL_SCHEMA = "tiresense.load-model.v1"
SLIP_MODEL_SCHEMA = "tiresense.slip-model.v1"
ESTIMATES_SCHEMA = "tiresense.estimates.v1"
REPORT_SCHEMA = "tiresense.report.v1"
SENSITIVITY_SCHEMA = "tiresense.sensitivity.v1"
PLOT_SCHEMA = "tiresense.plot.v1"
FEATURES_SCHEMA = "tiresense.features.v1"

_SCENARIO_FIELDS = (
    "unloaded_radius",
    "tread_depth",
    "vertical_load",
    "inflation_pressure",
    "slip_angle",
    "vehicle_speed",
    "stiffness_c0",
    "stiffness_c1",
    "wear_radius_gain",
    "release_angle",
)
_SENSOR_FIELDS = ("sample_rate", "noise_std", "dc_bias", "seed")
_REQUIRED_SCENARIO_FIELDS = (
    "unloaded_radius",
    "tread_depth",
    "vertical_load",
    "inflation_pressure",
    "slip_angle",
    "vehicle_speed",
)


def _write_json(path: Path, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False)
    Path(path).write_text(text + "\n")


def read_json(path: Path, expected_schema: str) -> dict:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(payload, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    version = payload.get("schema_version")
    if version != expected_schema:
        raise SchemaError(
            f"{path}: schema_version {version!r} is not {expected_schema!r}"
        )
    return payload


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


def sha256_of(path: Path) -> str:
    digest = hashlib.sha256()
    digest.update(Path(path).read_bytes())
    return digest.hexdigest()


# ---------------------------------------------------------------------------
# scenario files

def read_scenario(path: Path) -> tuple[TireScenario, SensorSpec]:
    """Read a flat scenario JSON carrying tire and sensor fields."""
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(payload, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    known = set(_SCENARIO_FIELDS) | set(_SENSOR_FIELDS)
    unknown = set(payload) - known
    if unknown:
        raise SchemaError(f"{path}: unknown fields {sorted(unknown)}")
    missing = [f for f in _REQUIRED_SCENARIO_FIELDS if f not in payload]
    if missing:
        raise SchemaError(f"{path}: missing required fields {missing}")
    scenario_kwargs = {k: payload[k] for k in _SCENARIO_FIELDS if k in payload}
    sensor_kwargs = {k: payload[k] for k in _SENSOR_FIELDS if k in payload}
    if "dc_bias" in sensor_kwargs:
        sensor_kwargs["dc_bias"] = tuple(sensor_kwargs["dc_bias"])
    return TireScenario(**scenario_kwargs), SensorSpec(**sensor_kwargs)


def scenario_to_dict(scenario: TireScenario, sensor: SensorSpec) -> dict:
    payload = {**asdict(scenario), **asdict(sensor)}
    payload["dc_bias"] = list(sensor.dc_bias)
    return payload


def write_scenario(path: Path, scenario: TireScenario, sensor: SensorSpec) -> None:
    _write_json(Path(path), scenario_to_dict(scenario, sensor))


# ---------------------------------------------------------------------------
# trace CSV + sidecar

def write_trace(
    path: Path,
    trace: AccelTrace,
    truth: GroundTruth,
    scenario: TireScenario,
    sensor: SensorSpec,
) -> Path:
    """Write trace CSV plus its JSON sidecar; returns the sidecar path."""
    path = Path(path)
    lines = [f"# schema={TRACE_SCHEMA}", "t,a_tangential,a_lateral,a_radial"]
    times = trace.times
    for i in range(len(trace)):
        row = trace.samples[i]
        lines.append(
            f"{_fmt(times[i])},{_fmt(row[0])},{_fmt(row[1])},{_fmt(row[2])}"
        )
    path.write_text("\n".join(lines) + "\n")

    sidecar = sidecar_path(path)
    payload = {
        "schema_version": SIDECAR_SCHEMA,
        "scenario": asdict(scenario),
        "sensor": {
            "sample_rate": sensor.sample_rate,
            "noise_std": sensor.noise_std,
            "dc_bias": list(sensor.dc_bias),
            "seed": sensor.seed,
        },
        "ground_truth": {k: list(map(float, v)) for k, v in asdict(truth).items()},
        "n_turns": truth.n_turns,
    }
    _write_json(sidecar, payload)
    return sidecar


def sidecar_path(trace_path: Path) -> Path:
    return Path(trace_path).with_suffix(".json")


def read_trace(path: Path) -> tuple[AccelTrace, GroundTruth, TireScenario, SensorSpec]:
    """Read a trace CSV and its sidecar back into memory."""
    path = Path(path)
    with path.open() as handle:
        first = handle.readline().strip()
        if first != f"# schema={TRACE_SCHEMA}":
            raise SchemaError(f"{path}: first line does not name schema {TRACE_SCHEMA}")
        header = handle.readline().strip()
        if header != "t,a_tangential,a_lateral,a_radial":
            raise SchemaError(f"{path}: unexpected CSV header {header!r}")
        data = np.loadtxt(handle, delimiter=",", ndmin=2)
    if data.shape[1] != 4:
        raise SchemaError(f"{path}: expected 4 columns")

    payload = read_json(sidecar_path(path), SIDECAR_SCHEMA)
    try:
        scenario = TireScenario(**payload["scenario"])
        sensor_raw = dict(payload["sensor"])
        sensor_raw["dc_bias"] = tuple(sensor_raw["dc_bias"])
        sensor = SensorSpec(**sensor_raw)
        truth = GroundTruth(
            **{k: np.asarray(v, dtype=float) for k, v in payload["ground_truth"].items()}
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"{sidecar_path(path)}: malformed sidecar ({exc})") from exc

    n = data.shape[0]
    trace = AccelTrace(
        sample_rate=sensor.sample_rate,
        samples=data[:, 1:4],
        duration=n / sensor.sample_rate,
    )
    return trace, truth, scenario, sensor


# ---------------------------------------------------------------------------
# model files

def write_load_models(
    path: Path, surface: LoadSurfaceModel, patch: PatchLoadModel
) -> None:
    payload = {
        "schema_version": LOAD_MODEL_SCHEMA,
        "surface": {
            "p00": surface.p00,
            "p10": surface.p10,
            "p01": surface.p01,
            "p11": surface.p11,
            "p02": surface.p02,
            "fit_residual_rms": surface.fit_residual_rms,
            "load_range": list(surface.load_range),
            "pressure_range": list(surface.pressure_range),
        },
        "patch": {
            "q0": patch.q0,
            "q1": patch.q1,
            "reference_pressure": patch.reference_pressure,
            "reference_tread": patch.reference_tread,
            "patch_length_range": list(patch.patch_length_range),
            "fit_residual_rms": patch.fit_residual_rms,
        },
    }
    _write_json(Path(path), payload)


def read_load_models(path: Path) -> tuple[LoadSurfaceModel, PatchLoadModel]:
    payload = read_json(Path(path), LOAD_MODEL_SCHEMA)
    try:
        s = payload["surface"]
        surface = LoadSurfaceModel(
            p00=s["p00"],
            p10=s["p10"],
            p01=s["p01"],
            p11=s["p11"],
            p02=s["p02"],
            fit_residual_rms=s["fit_residual_rms"],
            load_range=tuple(s["load_range"]),
            pressure_range=tuple(s["pressure_range"]),
        )
        p = payload["patch"]
        patch = PatchLoadModel(
            q0=p["q0"],
            q1=p["q1"],
            reference_pressure=p["reference_pressure"],
            reference_tread=p["reference_tread"],
            patch_length_range=tuple(p["patch_length_range"]),
            fit_residual_rms=p["fit_residual_rms"],
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"{path}: malformed load model ({exc})") from exc
    return surface, patch


def write_slip_model(path: Path, model: SlipModel) -> None:
    payload = {
        "schema_version": SLIP_MODEL_SCHEMA,
        "beta0": model.beta0,
        "beta1": model.beta1,
        "beta2": model.beta2,
        "fit_residual_rms": model.fit_residual_rms,
        "slip_range": list(model.slip_range),
    }
    _write_json(Path(path), payload)


def read_slip_model(path: Path) -> SlipModel:
    payload = read_json(Path(path), SLIP_MODEL_SCHEMA)
    try:
        return SlipModel(
            beta0=payload["beta0"],
            beta1=payload["beta1"],
            beta2=payload["beta2"],
            fit_residual_rms=payload["fit_residual_rms"],
            slip_range=tuple(payload["slip_range"]),
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"{path}: malformed slip model ({exc})") from exc


# ---------------------------------------------------------------------------
# estimates, features, plot data

def write_estimates(
    path: Path,
    loads_lbf: np.ndarray,
    slips_deg: np.ndarray,
    valid: np.ndarray,
) -> None:
    lines = [f"# schema={ESTIMATES_SCHEMA}", "turn,load_lbf,slip_deg,valid"]
    for i in range(len(loads_lbf)):
        lines.append(
            f"{i},{_fmt(loads_lbf[i])},{_fmt(slips_deg[i])},{int(valid[i])}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_estimates(path: Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    path = Path(path)
    with path.open() as handle:
        first = handle.readline().strip()
        if first != f"# schema={ESTIMATES_SCHEMA}":
            raise SchemaError(
                f"{path}: first line does not name schema {ESTIMATES_SCHEMA}"
            )
        header = handle.readline().strip()
        if header != "turn,load_lbf,slip_deg,valid":
            raise SchemaError(f"{path}: unexpected CSV header {header!r}")
        data = np.loadtxt(handle, delimiter=",", ndmin=2)
    if data.size == 0:
        return np.array([]), np.array([]), np.array([], dtype=bool)
    return data[:, 1], data[:, 2], data[:, 3].astype(bool)


def write_feature_table(path: Path, rows) -> None:
    lines = [
        f"# schema={FEATURES_SCHEMA}",
        "turn,patch_length_m,peak_radial_mm,peak_lateral_mm,lateral_slope",
    ]
    for row in rows:
        lines.append(
            f"{row.turn_index},{_fmt(row.patch_length)},"
            f"{_fmt(row.peak_radial_displacement)},"
            f"{_fmt(row.peak_lateral_displacement)},{_fmt(row.lateral_slope)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_plot_data(path: Path, rows) -> None:
    """Long-format plotting CSV; rows are (series, x, y) triples."""
    lines = [f"# schema={PLOT_SCHEMA}", "series,x,y"]
    for series, x, y in rows:
        lines.append(f"{series},{_fmt(x)},{_fmt(y)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_report(path: Path, report: dict) -> None:
    payload = {"schema_version": REPORT_SCHEMA, **report}
    _write_json(Path(path), payload)


def read_ranges(path: Path) -> tuple[dict, int]:
    """Read a sweep ranges file: factor -> [lo, hi] plus optional points."""
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(payload, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    points = int(payload.pop("points", 7))
    try:
        ranges = {
            factor: (float(bounds[0]), float(bounds[1]))
            for factor, bounds in payload.items()
        }
    except (TypeError, IndexError, ValueError) as exc:
        raise SchemaError(f"{path}: ranges must map factor to [lo, hi]") from exc
    return ranges, points


def write_sensitivity(path: Path, report) -> None:
    payload = {
        "schema_version": SENSITIVITY_SCHEMA,
        "ranges": {k: list(v) for k, v in report.ranges.items()},
        "center": report.center,
        "shares": report.shares,
        "spans": report.spans,
    }
    _write_json(Path(path), payload)
