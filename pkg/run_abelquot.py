import logging
import os
import time
from sys import exit

import click

from abelquot import config
from abelquot.certificate_io import (
    certificate_to_json,
    read_certificate_document,
    recheck_certificate,
    write_certificate,
)
from abelquot.certifier import certify, verify_many
from abelquot.enumeration import (
    cross_check,
    export_catalog,
    fixtures,
    transitive_groups,
)
from abelquot.errors import AbelquotError, IndeterminateError, InputError
from abelquot.inequalities import (
    constants_report,
    kp_bound_holds,
    kp_threshold,
    sweep_margins,
)
from abelquot.intervals import interval_log2
from abelquot.permutation import read_group_file
from abelquot.report_writer import write_sweep_csv, write_verify_csv
from abelquot.run_report import RunReport, Verdict
from abelquot.structure import abelianization_order


def parse_range(text):
    """Parse ``"A..B"`` (or a single ``"A"``) into an inclusive pair."""
    low, sep, high = text.partition("..")
    try:
        low = int(low)
        high = int(high) if sep else low
    except ValueError:
        raise InputError(f"Invalid degree range {text!r}; use A..B") from None
    if high < low:
        raise InputError(f"Empty degree range {text!r}")
    return low, high


def _format_float(value):
    return f"{float(value):.4f}"


def _echo_report(report, timing):
    click.echo(report.text(timing), nl=False)


def _finish(run, timing, **kwargs):
    """Run a command function and exit with its exit code."""
    try:
        report = run(**kwargs)
    except InputError as e:
        click.echo(f"Input error: {e}", err=True)
        exit(2)
    except IndeterminateError as e:
        click.echo(f"Indeterminate: {e}", err=True)
        exit(1)
    except AbelquotError as e:
        click.echo(f"Error: {e}", err=True)
        exit(1)
    _echo_report(report, timing)
    exit(report.exit_code)


@click.group()
@click.option(
    "-v",
    "--verbose",
    count=True,
    help="Log progress; repeat for debug output.",
)
def cli(verbose):
    """Transitive permutation groups and the bound on their largest
    abelian quotient."""
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s"
    )


def precision_option(function):
    return click.option(
        "-p",
        "--precision",
        default=config.DEFAULT_PRECISION,
        show_default=True,
        help="Starting interval precision in bits.",
    )(function)


def timing_option(function):
    return click.option(
        "--timing",
        is_flag=True,
        default=False,
        help="Also print the wall time (makes output differ between runs).",
    )(function)


@cli.command("verify")
@click.option(
    "-e",
    "--enumerate",
    "enumerate_range",
    default=None,
    help="Check every transitive group of the degrees A..B (2..7).",
)
@click.option(
    "-x",
    "--fixtures",
    "fixture_range",
    default=None,
    help="Check the curated groups of the degrees A..B (2..81).",
)
@click.option(
    "-f",
    "--file",
    "files",
    multiple=True,
    help="Group file to check; may be repeated.",
)
@click.option("-j", "--jobs", default=1, help="Worker processes.")
@click.option(
    "--allow-degree-8",
    is_flag=True,
    default=False,
    help="Permit exhaustive enumeration at degree 8 (slow).",
)
@click.option(
    "--kp-base-degree",
    default=0,
    help="Certificate nodes up to this degree use the 3^(n/3) bound.",
)
@click.option(
    "--cross-check",
    "cross_check_catalogs",
    is_flag=True,
    default=False,
    help="Compare the enumerated catalogs with brute force (degree <= 5).",
)
@click.option("--csv", "csv_path", default=None, help="Write verdicts to CSV.")
@precision_option
@timing_option
def verify_cli(
    enumerate_range,
    fixture_range,
    files,
    jobs,
    allow_degree_8,
    kp_base_degree,
    csv_path,
    cross_check_catalogs,
    precision,
    timing,
):
    """Check |G_ab| <= 4^(n/sqrt(log2 n)) on groups."""
    _finish(
        run_verify,
        timing,
        enumerate_range=enumerate_range,
        fixture_range=fixture_range,
        files=files,
        jobs=jobs,
        allow_degree_8=allow_degree_8,
        kp_base_degree=kp_base_degree,
        csv_path=csv_path,
        cross_check_catalogs=cross_check_catalogs,
        precision=precision,
    )


def run_verify(
    enumerate_range=None,
    fixture_range=None,
    files=(),
    jobs=1,
    allow_degree_8=False,
    kp_base_degree=0,
    csv_path=None,
    cross_check_catalogs=False,
    precision=config.DEFAULT_PRECISION,
):
    """Checks the abelianization bound on a set of groups.
    Non-click version to work from jupyter notebooks.

    Parameters
    ----------
    enumerate_range : str
        Degree range ``"A..B"`` for the exhaustive catalogs.
    fixture_range : str
        Degree range ``"A..B"`` for the curated fixtures.
    files : list of str
        Paths of group files.
    jobs : int
        Worker processes.
    allow_degree_8 : bool
        Permit exhaustive enumeration at degree 8.
    kp_base_degree : int
        Passed to the certifier.
    csv_path : str
        Optional CSV output of the per-group verdicts.
    cross_check_catalogs : bool
        Also compare the enumerated catalogs of degree 5 and below with
        the brute-force oracle.
    precision : int
        Starting precision in bits.

    Returns
    -------
    RunReport

    """
    start = time.time()
    groups = []
    catalogs = []
    if enumerate_range:
        low, high = parse_range(enumerate_range)
        for n in range(low, high + 1):
            catalog = transitive_groups(
                n, allow_degree_8=allow_degree_8, jobs=jobs
            )
            catalogs.append(catalog)
            groups.extend(catalog)
    if fixture_range:
        low, high = parse_range(fixture_range)
        for n in range(low, high + 1):
            groups.extend(fixtures(n))
    for path in files:
        if not os.path.exists(path):
            raise InputError(f"Group file {path} does not exist")
        group = read_group_file(path)
        if not group.label:
            group = group.with_label(os.path.basename(path))
        groups.append(group)
    if not groups:
        raise InputError(
            "Nothing to verify: give --enumerate, --fixtures or --file"
        )
    if cross_check_catalogs and not enumerate_range:
        raise InputError("--cross-check needs --enumerate")

    command = "verify"
    if enumerate_range:
        command += f" --enumerate {enumerate_range}"
    if fixture_range:
        command += f" --fixtures {fixture_range}"
    for path in files:
        command += f" --file {os.path.basename(path)}"
    if cross_check_catalogs:
        command += " --cross-check"
    report = RunReport(command, precision)
    if cross_check_catalogs:
        for catalog in catalogs:
            if catalog.degree > config.BRUTE_FORCE_MAX_DEGREE:
                continue
            report.add(
                f"cross-check degree {catalog.degree}",
                Verdict.PASS if cross_check(catalog) else Verdict.FAIL,
                f"{len(catalog)} classes",
            )
    results = verify_many(
        groups,
        jobs=jobs,
        keep_going=True,
        precision=precision,
        kp_base_degree=kp_base_degree,
    )
    finished = []
    for group, result in zip(groups, results):
        name = group.label or f"degree {group.degree}"
        if isinstance(result, IndeterminateError):
            report.add(name, Verdict.INDETERMINATE, str(result))
            continue
        finished.append(result)
        ok = (
            result.holds
            and result.kp_holds
            and result.certificate_sound
            and result.block_bounds_hold
        )
        if result.primitive_bound_holds is False:
            ok = False
        margin = result.theorem_rhs.lo - result.log2_abelianization.hi
        detail = (
            f"n={result.degree} |G|={result.order} "
            f"|G_ab|={result.abelianization_order} "
            f"log2|G_ab|<={_format_float(result.log2_abelianization.hi)} "
            f"bound>={_format_float(result.theorem_rhs.lo)} "
            f"margin>={_format_float(margin)} "
            f"certificate<={_format_float(result.certificate.bound.hi)}"
        )
        report.add(name, Verdict.PASS if ok else Verdict.FAIL, detail)
    if csv_path:
        write_verify_csv(finished, csv_path)
        report.notes.append(f"verdicts written to {csv_path}")
    report.wall_time = time.time() - start
    return report


@cli.command("certify")
@click.option("-f", "--file", "path", required=True, help="Group file.")
@click.option(
    "-o", "--json", "json_path", default=None, help="Write the certificate."
)
@click.option(
    "--recheck",
    is_flag=True,
    default=False,
    help="Re-derive every number of the certificate independently.",
)
@click.option(
    "--kp-base-degree",
    default=0,
    help="Nodes up to this degree use the 3^(n/3) bound.",
)
@precision_option
@timing_option
def certify_cli(path, json_path, recheck, kp_base_degree, precision, timing):
    """Build a certificate bounding log2 |G_ab| for one group."""
    _finish(
        run_certify,
        timing,
        path=path,
        json_path=json_path,
        recheck=recheck,
        kp_base_degree=kp_base_degree,
        precision=precision,
    )


def run_certify(
    path,
    json_path=None,
    recheck=False,
    kp_base_degree=0,
    precision=config.DEFAULT_PRECISION,
):
    """Builds, writes and optionally re-checks a certificate.
    Non-click version to work from jupyter notebooks.

    Parameters
    ----------
    path : str
        Group file.
    json_path : str
        Where to write the certificate JSON, if anywhere.
    recheck : bool
        Re-check the document (re-read from ``json_path`` when given).
    kp_base_degree : int
        Nodes up to this degree use the 3^(n/3) bound.
    precision : int
        Precision in bits.

    Returns
    -------
    RunReport

    """
    start = time.time()
    if not os.path.exists(path):
        raise InputError(f"Group file {path} does not exist")
    group = read_group_file(path)
    command = f"certify --file {os.path.basename(path)}"
    report = RunReport(command, precision)
    certificate = certify(
        group, kp_base_degree=kp_base_degree, precision=precision
    )
    for node in certificate.nodes():
        if node.kind.value == "imprimitive-step":
            counts = ", ".join(f"{p}^{a}" for p, a in node.ar.counts) or "none"
            flag = "" if node.ar_bound_holds else " (a(R) above bound)"
            report.notes.append(
                f"degree {node.degree}: {node.kind.value} r={node.r} "
                f"d={node.d} abelian factors {counts} "
                f"term<={_format_float(node.term.hi)}{flag}"
            )
        else:
            report.notes.append(
                f"degree {node.degree}: {node.kind.value} "
                f"bound<={_format_float(node.bound.hi)}"
            )
    m = abelianization_order(group)
    log2_m = interval_log2(m, precision)
    sound = log2_m.hi <= certificate.bound.hi
    sound = sound and all(
        node.ar_bound_holds
        for node in certificate.nodes()
        if node.kind.value == "imprimitive-step"
    )
    report.add(
        group.label or os.path.basename(path),
        Verdict.PASS if sound else Verdict.FAIL,
        f"log2|G_ab|<={_format_float(log2_m.hi)} "
        f"certificate<={_format_float(certificate.bound.hi)}",
    )
    document = certificate_to_json(certificate, precision)
    if json_path:
        write_certificate(certificate, json_path, precision)
        name = os.path.basename(json_path)
        report.notes.append(f"certificate written to {name}")
        if recheck:
            document = read_certificate_document(json_path)
    if recheck:
        outcome = recheck_certificate(
            document, group=group, precision=precision
        )
        report.add(
            "recheck",
            Verdict.PASS if outcome.ok else Verdict.FAIL,
            "; ".join(outcome.problems),
        )
    report.wall_time = time.time() - start
    return report


@cli.command("constants")
@precision_option
@timing_option
def constants_cli(precision, timing):
    """Print enclosures of c0, b' and the 3^(n/3) crossover degree."""
    _finish(run_constants, timing, precision=precision)


def run_constants(precision=config.DEFAULT_PRECISION):
    """Computes the constants report.
    Non-click version to work from jupyter notebooks.
    """
    start = time.time()
    report = RunReport("constants", precision)
    for row in constants_report(precision):
        report.notes.append(
            f"{row.name}: [{row.lo}, {row.hi}] width {row.width:.3e}"
        )
    threshold = kp_threshold(precision)
    flips = kp_bound_holds(threshold, precision) and not kp_bound_holds(
        threshold + 1, precision
    )
    report.add(
        "threshold",
        Verdict.PASS if flips else Verdict.FAIL,
        f"{threshold}",
    )
    report.wall_time = time.time() - start
    return report


@cli.command("sweep")
@click.option(
    "--nmin",
    default=config.SWEEP_NMIN,
    show_default=True,
    help="First degree checked.",
)
@click.option(
    "--nmax",
    default=config.SWEEP_NMAX,
    show_default=True,
    help="Last degree checked.",
)
@click.option("-j", "--jobs", default=1, help="Worker processes.")
@click.option("--csv", "csv_path", default=None, help="Write per-n margins.")
@precision_option
@timing_option
def sweep_cli(nmin, nmax, jobs, csv_path, precision, timing):
    """Check the imprimitive-case inequality for every degree in a range."""
    _finish(
        run_sweep,
        timing,
        n_min=nmin,
        n_max=nmax,
        jobs=jobs,
        csv_path=csv_path,
        precision=precision,
    )


def run_sweep(
    n_min=config.SWEEP_NMIN,
    n_max=config.SWEEP_NMAX,
    jobs=1,
    csv_path=None,
    precision=config.DEFAULT_PRECISION,
):
    """Runs the inequality sweep.
    Non-click version to work from jupyter notebooks.

    Parameters
    ----------
    n_min, n_max : int
        Inclusive degree range.
    jobs : int
        Worker processes.
    csv_path : str
        Optional CSV of the per-degree margins.
    precision : int
        Starting precision in bits.

    Returns
    -------
    RunReport

    """
    start = time.time()
    result = sweep_margins(n_min, n_max, precision=precision, jobs=jobs)
    report = RunReport(f"sweep --nmin {n_min} --nmax {n_max}", precision)
    for violation in result.violations:
        report.add(
            f"n={violation.n} r={violation.r}",
            Verdict.FAIL,
            f"rhs_aux<={violation.rhs_aux_hi:.4f} "
            f"bound>={violation.theorem_rhs_lo:.4f}",
        )
    tightest = min(result.rows, key=lambda row: row.margin)
    report.notes.append(
        f"{len(result.rows)} degrees checked, "
        f"{len(result.violations)} violations"
    )
    report.notes.append(
        f"smallest margin {tightest.margin:.4f} "
        f"at n={tightest.n} r={tightest.r}"
    )
    if csv_path:
        write_sweep_csv(result.rows, csv_path)
        report.notes.append(f"margins written to {csv_path}")
    report.wall_time = time.time() - start
    return report


@cli.command("export-catalog")
@click.option(
    "-d", "--degree", "degree_range", required=True, help="Degrees A..B."
)
@click.option(
    "-o", "--out", "out_dir", required=True, help="Output directory."
)
@click.option(
    "--fixtures",
    "use_fixtures",
    is_flag=True,
    default=False,
    help="Export the curated fixtures instead of the exhaustive catalogs.",
)
@click.option(
    "--allow-degree-8",
    is_flag=True,
    default=False,
    help="Permit exhaustive enumeration at degree 8 (slow).",
)
@timing_option
def export_catalog_cli(
    degree_range, out_dir, use_fixtures, allow_degree_8, timing
):
    """Write catalogs as group files plus an index CSV."""
    _finish(
        run_export_catalog,
        timing,
        degree_range=degree_range,
        out_dir=out_dir,
        use_fixtures=use_fixtures,
        allow_degree_8=allow_degree_8,
    )


def run_export_catalog(
    degree_range, out_dir, use_fixtures=False, allow_degree_8=False
):
    """Exports catalogs, one subdirectory per degree.
    Non-click version to work from jupyter notebooks.
    """
    start = time.time()
    low, high = parse_range(degree_range)
    report = RunReport(
        f"export-catalog --degree {degree_range}", config.DEFAULT_PRECISION
    )
    for n in range(low, high + 1):
        if use_fixtures:
            catalog = fixtures(n)
        else:
            catalog = transitive_groups(n, allow_degree_8=allow_degree_8)
        export_catalog(catalog, os.path.join(out_dir, f"degree-{n}"))
        report.add(f"degree {n}", Verdict.PASS, f"{len(catalog)} groups")
    report.wall_time = time.time() - start
    return report


if __name__ == "__main__":
    cli()
