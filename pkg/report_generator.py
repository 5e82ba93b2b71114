#!/usr/bin/env python3
"""
Report Generator for Disk Invariant Runs
Renders invariant tables, series dumps and verification reports as plain text, JSON or CSV

Exact values are always written as fraction strings ("num/den" or an integer),
never as floats.
"""

import json

import pandas as pd

FORMATS = ('plain', 'json', 'csv')

# series expanded in the mirror coordinate Q rather than their stored variable
SERIES_VARIABLES = {'q(Q)': 'Q'}


def fraction_text(value):
    """Exact rational as 'num/den' (or 'num' when the denominator is 1)"""
    return str(value)


def _dump_json(payload):
    return json.dumps(payload, indent=2)


def _dump_csv(df):
    return df.to_csv(index=False, lineterminator="\n").rstrip("\n")


def series_variable(name, s):
    return SERIES_VARIABLES.get(name, s.variable)


def invariants_table(invariants):
    """
    Tabulate disk invariants

    Parameters:
    invariants: dict {d: Fraction}

    Returns:
    pd.DataFrame: columns d, value
    """
    return pd.DataFrame({
        'd': [int(d) for d in sorted(invariants)],
        'value': [fraction_text(invariants[d]) for d in sorted(invariants)],
    })


def render_invariants(geometry, max_degree, invariants, fmt='plain'):
    """Invariant table in the requested format"""
    df = invariants_table(invariants)
    if fmt == 'json':
        return _dump_json({
            'geometry': geometry.summary(),
            'max_degree': max_degree,
            'invariants': [{'d': int(row.d), 'value': row.value} for row in df.itertuples()],
        })
    if fmt == 'csv':
        return _dump_csv(df)

    lines = [
        f"One-point disk invariants of X{geometry.label}",
        f"n = {geometry.n}, l = {geometry.l}, p_max = {geometry.p_max}, odd d <= {max_degree}",
        "=" * 50,
        df.to_string(index=False),
    ]
    return "\n".join(lines)


def series_table(series):
    """
    Long-form coefficient table

    Parameters:
    series: dict {name: TruncatedSeries}

    Returns:
    pd.DataFrame: columns name, variable, power, value
    """
    rows = []
    for name, s in series.items():
        for power, c in enumerate(s.coeffs):
            rows.append({
                'name': name,
                'variable': series_variable(name, s),
                'power': power,
                'value': fraction_text(c),
            })
    return pd.DataFrame(rows, columns=['name', 'variable', 'power', 'value'])


def render_series(geometry, max_degree, series, fmt='plain'):
    """Coefficient lists of the generating series"""
    if fmt == 'json':
        return _dump_json({
            'geometry': geometry.summary(),
            'max_degree': max_degree,
            'series': [
                {
                    'name': name,
                    'variable': series_variable(name, s),
                    'trunc': s.trunc,
                    'coefficients': [fraction_text(c) for c in s.coeffs],
                }
                for name, s in series.items()
            ],
        })
    if fmt == 'csv':
        return _dump_csv(series_table(series))

    lines = [
        f"Generating series of X{geometry.label} (disk degrees <= {max_degree})",
        "=" * 50,
    ]
    for name, s in series.items():
        var = series_variable(name, s)
        lines.append(f"{name} ({var}^0..{var}^{s.trunc}): {s.format_coefficients()}")
    return "\n".join(lines)


def check_rows(report):
    """One record per identity check, without timings"""
    return [
        {
            'identity': c.identity,
            'p': c.p,
            's': c.s,
            'sample': c.sample,
            'status': 'pass' if c.passed else 'FAIL',
            'first_difference': '' if c.first_difference is None else f"u^{c.first_difference}",
        }
        for c in report.checks
    ]


def checks_table(report):
    return pd.DataFrame(
        check_rows(report),
        columns=['identity', 'p', 's', 'sample', 'status', 'first_difference'],
    )


def timing_summary(report):
    """Total seconds and check count per identity"""
    df = pd.DataFrame(
        [{'identity': c.identity, 'seconds': c.seconds} for c in report.checks],
        columns=['identity', 'seconds'],
    )
    return df.groupby('identity', sort=True)['seconds'].agg(checks='count', total='sum').reset_index()


def failure_records(report):
    return [
        {
            'identity': c.identity,
            'p': c.p,
            's': c.s,
            'sample': c.sample,
            'weights': report.weights[c.sample].labels(),
            'first_difference': c.first_difference,
        }
        for c in report.failures
    ]


def render_verification(report, seed, fmt='plain'):
    """Verification report; timings are kept out so output is reproducible"""
    g = report.geometry
    if fmt == 'json':
        return _dump_json({
            'geometry': g.summary(),
            'max_degree': report.trunc_u,
            'guard_order': report.work_order,
            'seed': seed,
            'weights': [w.labels() for w in report.weights],
            'passed': report.passed,
            'checks': check_rows(report),
            'failures': failure_records(report),
        })
    if fmt == 'csv':
        return _dump_csv(checks_table(report))

    lines = [
        f"Localization identities for X{g.label} to u^{report.trunc_u}",
        f"computed to u^{report.work_order}, seed {seed}, {len(report.weights)} weight samples",
    ]
    for k, w in enumerate(report.weights):
        lines.append(f"  sample {k}: lambda = ({', '.join(w.labels())})")
    lines.append("=" * 50)
    lines.append(checks_table(report).to_string(index=False))
    lines.append("=" * 50)
    if report.passed:
        lines.append(f"RESULT: PASS ({len(report.checks)} checks)")
    else:
        lines.append(f"RESULT: FAIL ({len(report.failures)} of {len(report.checks)} checks failed)")
        for record in failure_records(report):
            lines.append(f"  {record}")
    return "\n".join(lines)
