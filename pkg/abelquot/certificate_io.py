"""JSON form of certificates and an independent re-check of a document.

Interval endpoints are written as decimal strings rounded outward to a
fixed number of places. The ``bound_hi`` of an imprimitive step is written
as the exact sum of its child's ``bound_hi`` and its own ``term_hi``
strings, so the recursion can be re-summed from the document alone.
"""
import json
import logging
from fractions import Fraction
from typing import NamedTuple

from sympy import isprime

from . import config
from .certifier import Certificate, CertificateKind, certify
from .errors import InputError
from .inequalities import constants, spread
from .intervals import Interval, decide, format_decimal, interval_log2
from .structure import ARInvariant, abelianization_order

logger = logging.getLogger(__name__)

FORMAT_NAME = "abelquot-certificate"
FORMAT_VERSION = 1


def _decimal(value, places):
    scaled = value * 10**places
    if scaled.denominator != 1:
        raise InputError(f"{value} has more than {places} decimal places")
    return format_decimal(scaled.numerator, places)


def _node_to_dict(node, places):
    result = {
        "degree": node.degree,
        "kind": node.kind.value,
        "label": node.label,
    }
    if node.kind is CertificateKind.IMPRIMITIVE_STEP:
        child = _node_to_dict(node.child, places)
        term_lo, term_hi = node.term.to_decimal(places)
        bound_hi = Fraction(child["bound_hi"]) + Fraction(term_hi)
        result.update(
            {
                "r": node.r,
                "d": node.d,
                "aR_counts": {str(p): a for p, a in node.ar.counts},
                "aR_product": str(node.ar.product),
                "aR_bound_holds": node.ar_bound_holds,
                "term_lo": term_lo,
                "term_hi": term_hi,
                "bound_hi": _decimal(bound_hi, places),
                "child": child,
            }
        )
    else:
        result["bound_hi"] = node.bound.to_decimal(places)[1]
    return result


def certificate_to_json(
    certificate, precision=config.DEFAULT_PRECISION, places=None
):
    """Serialise a certificate.

    Parameters
    ----------
    certificate : Certificate
        Root of the tree.
    precision : int
        Precision the certificate was computed with (recorded only).
    places : int
        Decimal places for endpoints (default ``config.DECIMAL_PLACES``).

    Returns
    -------
    dict
        JSON-compatible document.

    """
    places = config.DECIMAL_PLACES if places is None else places
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "precision": precision,
        "decimal_places": places,
        "root": _node_to_dict(certificate, places),
    }


def _kind(value):
    try:
        return CertificateKind(value)
    except ValueError:
        raise InputError(f"Unknown certificate node kind {value!r}") from None


def _node_from_dict(data):
    kind = _kind(data["kind"])
    bound_hi = Fraction(data["bound_hi"])
    if kind is not CertificateKind.IMPRIMITIVE_STEP:
        return Certificate(
            data["degree"],
            kind,
            Interval(bound_hi),
            label=data.get("label", ""),
        )
    counts = tuple(
        sorted((int(p), int(a)) for p, a in data["aR_counts"].items())
    )
    return Certificate(
        data["degree"],
        kind,
        Interval(bound_hi),
        r=data["r"],
        d=data["d"],
        ar=ARInvariant(counts),
        term=Interval(Fraction(data["term_lo"]), Fraction(data["term_hi"])),
        child=_node_from_dict(data["child"]),
        label=data.get("label", ""),
        ar_bound_holds=data.get("aR_bound_holds"),
    )


def certificate_from_json(document):
    """Rebuild a :class:`Certificate` from :func:`certificate_to_json`
    output. Bounds come back as point intervals at their upper ends."""
    if document.get("format") != FORMAT_NAME:
        raise InputError("Document is not an abelquot certificate")
    try:
        return _node_from_dict(document["root"])
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"Malformed certificate document: {e}") from None


def write_certificate(certificate, path, precision=config.DEFAULT_PRECISION):
    with open(path, "w") as f:
        json.dump(certificate_to_json(certificate, precision), f, indent=2)
        f.write("\n")


def read_certificate_document(path):
    with open(path) as f:
        return json.load(f)


class RecheckReport(NamedTuple):
    ok: bool
    problems: list


def _check_node(data, precision, problems, path):
    where = f"{path} (degree {data.get('degree')})"
    kind = _kind(data["kind"])
    n = data["degree"]
    bound_hi = Fraction(data["bound_hi"])
    if kind is CertificateKind.PRIMITIVE_BASE:
        if interval_log2(n, precision).hi > bound_hi:
            problems.append(f"{where}: bound below log2 n")
        return
    if kind is CertificateKind.KP_BASE:
        kp = constants(precision).log3 * n / 3
        if kp.hi > bound_hi:
            problems.append(f"{where}: bound below (n/3) log2 3")
        return

    r, d = data["r"], data["d"]
    child = data["child"]
    if r < 2 or d < 2 or r * d != n:
        problems.append(f"{where}: r={r}, d={d} do not split the degree")
    if child["degree"] != d:
        problems.append(f"{where}: child degree {child['degree']} != d={d}")
    counts = {int(p): int(a) for p, a in data["aR_counts"].items()}
    if not all(isprime(p) and a > 0 for p, a in counts.items()):
        problems.append(f"{where}: a(R) counts must be positive, by prime")
    ar = ARInvariant(tuple(sorted(counts.items())))
    if ar.product != int(data["aR_product"]):
        problems.append(f"{where}: aR_product does not match the counts")
    ar_bound_holds = ar.ar_bound_holds(r, precision) if r >= 2 else False
    if not ar_bound_holds:
        problems.append(f"{where}: a(R) exceeds the primitive bound for r={r}")
    if data.get("aR_bound_holds", ar_bound_holds) != ar_bound_holds:
        problems.append(f"{where}: aR_bound_holds disagrees with a(R)")
    if d >= 2:
        term = ar.bits(precision) * constants(precision).bprime * spread(
            d, precision
        )
        if not (
            Fraction(data["term_lo"]) <= term.lo
            and term.hi <= Fraction(data["term_hi"])
        ):
            problems.append(
                f"{where}: term does not enclose a(R) b' d/sqrt(log d)"
            )
    if Fraction(child["bound_hi"]) + Fraction(data["term_hi"]) != bound_hi:
        problems.append(f"{where}: bound_hi is not child bound plus term")
    _check_node(child, precision, problems, path + ".child")


def _same_shape(data, node):
    if data["degree"] != node.degree or _kind(data["kind"]) is not node.kind:
        return False
    if node.kind is not CertificateKind.IMPRIMITIVE_STEP:
        return True
    counts = tuple(sorted((int(p), a) for p, a in data["aR_counts"].items()))
    return (
        data["r"] == node.r
        and data["d"] == node.d
        and counts == node.ar.counts
        and _same_shape(data["child"], node.child)
    )


def recheck_certificate(document, group=None, precision=None):
    """Re-derive every number of a certificate document.

    Each term is recomputed from its a(R) counts, ``r`` and ``d``; every
    ``bound_hi`` is re-summed; leaves are compared with ``log2 n`` or
    ``(n/3) log2 3``. With a group, the decomposition is recomputed and the
    exact abelianization is checked against the root bound.

    Parameters
    ----------
    document : dict
        Output of :func:`certificate_to_json`.
    group : GroupSpec
        Optional group the certificate claims to describe.
    precision : int
        Precision for the recomputation (default: the document's).

    Returns
    -------
    RecheckReport

    """
    if document.get("format") != FORMAT_NAME:
        raise InputError("Document is not an abelquot certificate")
    precision = precision or document.get(
        "precision", config.DEFAULT_PRECISION
    )
    root = document["root"]
    problems = []
    try:
        _check_node(root, precision, problems, "root")
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"Malformed certificate document: {e}") from None

    if group is not None:
        if group.degree != root["degree"]:
            problems.append("group degree differs from the certificate")
        else:
            kp_base = 0
            node = root
            while node is not None:
                if _kind(node["kind"]) is CertificateKind.KP_BASE:
                    kp_base = node["degree"]
                node = node.get("child")
            fresh = certify(group, kp_base_degree=kp_base, precision=precision)
            if not _same_shape(root, fresh):
                problems.append(
                    "decomposition differs from a fresh certify run"
                )
            m = abelianization_order(group)
            bound_hi = Fraction(root["bound_hi"])
            if not decide(
                lambda bits: Interval.exact(bound_hi) - interval_log2(m, bits),
                precision,
            ):
                problems.append(
                    f"log2 |G_ab| = log2 {m} exceeds the root bound"
                )
    for problem in problems:
        logger.warning("Certificate problem: %s", problem)
    return RecheckReport(not problems, problems)
