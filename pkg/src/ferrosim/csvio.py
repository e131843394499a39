"""CSV readers/writers for traces, loops, reversal families and fits.

Formats (exact headers):
  trace     t_s,v_V,e_fe_Vm,p_mean_Cm2,d_mean_Cm2,i_A,u_J
  loop      e_fe_Vm,p_t_Cm2
  metrics   p_r_pos_Cm2,p_r_neg_Cm2,e_c_pos_Vm,e_c_neg_Vm,loop_area_Jm3
  reversal  field_Vm,t_s,delta_p_Cm2
Floats are written with repr-faithful precision so reruns are bit-identical.
"""

from pathlib import Path

import numpy as np

TRACE_HEADER = "t_s,v_V,e_fe_Vm,p_mean_Cm2,d_mean_Cm2,i_A,u_J"
LOOP_HEADER = "e_fe_Vm,p_t_Cm2"
METRICS_HEADER = "p_r_pos_Cm2,p_r_neg_Cm2,e_c_pos_Vm,e_c_neg_Vm,loop_area_Jm3"
REVERSAL_HEADER = "field_Vm,t_s,delta_p_Cm2"
SWITCHING_HEADER = "field_Vm,t_sw_s"
SCURVE_HEADER = "p_Cm2,e_Vm"
FIT_HEADER = "model,p_s_Cm2,tau_s,n,log10_tau_med,w_decades,rms_residual_Cm2"
FITTED_CURVE_HEADER = "t_s,delta_p_Cm2"


def _fmt(x) -> str:
    return repr(float(x))


def _write_rows(path, header: str, rows) -> None:
    lines = [header]
    lines.extend(",".join(_fmt(x) if not isinstance(x, str) else x for x in row)
                 for row in rows)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_trace_csv(path, trace) -> None:
    _write_rows(path, TRACE_HEADER,
                zip(trace.t, trace.v, trace.e_fe, trace.p_mean,
                    trace.d_mean, trace.i, trace.u_total))


def write_loop_csv(path, e_fe, p_t) -> None:
    _write_rows(path, LOOP_HEADER, zip(e_fe, p_t))


def write_metrics_csv(path, metrics) -> None:
    _write_rows(path, METRICS_HEADER,
                [(metrics.p_r_pos, metrics.p_r_neg,
                  metrics.e_c_pos, metrics.e_c_neg, metrics.loop_area)])


def write_family_csv(path, triples) -> None:
    """triples: iterable of (field, times, delta_p) per curve."""
    rows = []
    for field, times, delta_p in triples:
        rows.extend((field, t, dp) for t, dp in zip(times, delta_p))
    _write_rows(path, REVERSAL_HEADER, rows)


def write_reversal_csv(path, curves) -> None:
    write_family_csv(path, ((c.field, c.times, c.delta_p) for c in curves))


def write_switching_csv(path, fields, t_sw) -> None:
    _write_rows(path, SWITCHING_HEADER,
                [(f, "" if t is None else _fmt(t)) for f, t in zip(fields, t_sw)])


def write_scurve_csv(path, curve) -> None:
    _write_rows(path, SCURVE_HEADER, zip(curve.p, curve.e))


def write_fit_csv(path, rows) -> None:
    """rows: iterables (model, p_s, tau_s_or_blank, n, log10_tau_or_blank,
    w_or_blank, residual); blanks are empty strings."""
    _write_rows(path, FIT_HEADER, rows)


def write_fitted_curve_csv(path, t, delta_p) -> None:
    _write_rows(path, FITTED_CURVE_HEADER, zip(t, delta_p))


def _parse_csv(path, expected_columns: int):
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if lineno == 1:
                try:
                    [float(x) for x in parts]
                except ValueError:
                    continue   # header line
            if len(parts) != expected_columns:
                raise ValueError(
                    f"{path}: line {lineno}: expected {expected_columns} "
                    f"columns, got {len(parts)}")
            try:
                rows.append([float(x) for x in parts])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: non-numeric value") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return np.asarray(rows)


def read_two_column_csv(path):
    """(t, delta_p) pairs, with or without a header line."""
    data = _parse_csv(path, 2)
    return data[:, 0], data[:, 1]


def read_reversal_csv(path):
    """Reversal family CSV -> list of (field, t, delta_p) per distinct field."""
    data = _parse_csv(path, 3)
    curves = []
    for field in np.unique(data[:, 0]):
        sel = data[:, 0] == field
        curves.append((float(field), data[sel, 1], data[sel, 2]))
    return curves
