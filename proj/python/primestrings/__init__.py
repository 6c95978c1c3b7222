"""Strings of consecutive special primes in residue classes, and Maier-matrix experiments."""

import json

from ._core import (
    PrimestringsError,
    beatty_member,
    build_Q,
    case1_proxy,
    classify_residue,
    count_primes_ap,
    count_psi,
    count_S_q,
    crt_anchor,
    enumerate_special,
    is_prime,
    residue_census,
    scan_all_strings,
    sieve_range,
    special_primes,
    string_bound_pm,
    validate_g,
)
from . import _core

__version__ = "0.3.0"


def find_first_string(set, k, q, a, limit, workers=1):
    """First k consecutive set-primes = a (mod q) below limit, as a record dict."""
    return json.loads(_core.find_first_string_json(set, k, q, a, limit, workers))


def maier(q, a, **options):
    """Build Q and the interval, sample rows of the Maier matrix, return the census record."""
    record = json.loads(_core.maier_json(q, a, **options))
    record["Q"] = int(record["Q"])
    return record


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]
