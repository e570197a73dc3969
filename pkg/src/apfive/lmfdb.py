"""HTTP client for fetching weight-2 newform eigenvalue data.

All endpoint templates and JSON field mappings for the external source live
in this one file. The default source is the public LMFDB API; the base URL
and the transport are injectable so the adapter can run against mirrors or
recorded responses.

Only eigenvalue data presented in the power basis of the field polynomial
is accepted; anything else is rejected with a clear message rather than
converted.
"""

from __future__ import annotations

import time
from fractions import Fraction
from pathlib import Path

import httpx

from .newforms import (
    REQUIRED_PRIME_BOUND,
    DataGapError,
    NewformClass,
    SchemaError,
    sieve_primes_for_level,
    write_level_file,
)
from .rings import IntPoly, NumberField, is_prime

__all__ = ["FetchError", "fetch_remote", "DEFAULT_BASE_URL"]

DEFAULT_BASE_URL = "https://www.lmfdb.org"

# endpoint templates and the fields requested from each table
NEWFORMS_ENDPOINT = "/api/mf_newforms/"
NEWFORMS_QUERY = {
    "weight": "2",
    "char_order": "1",
    "_format": "json",
    "_fields": "label,level,weight,dim,field_poly",
}
HECKE_ENDPOINT = "/api/mf_hecke_nf/"
HECKE_QUERY = {
    "_format": "json",
    "_fields": "label,ap,field_poly,hecke_ring_power_basis,maxp",
}
PAGE_OFFSET_PARAM = "_offset"


class FetchError(RuntimeError):
    """Download or translation of remote newform data failed."""


def _get_json(client: httpx.Client, url: str, params: dict, retries: int) -> dict:
    last = None
    for attempt in range(retries):
        try:
            resp = client.get(url, params=params)
            resp.raise_for_status()
            return resp.json()
        except (httpx.HTTPError, ValueError) as exc:
            last = exc
            if attempt + 1 < retries:
                time.sleep(min(2**attempt, 8))
    raise FetchError(f"GET {url} failed after {retries} attempts: {last}")


def _paged_data(client: httpx.Client, url: str, params: dict, retries: int) -> list[dict]:
    rows: list[dict] = []
    offset = 0
    while True:
        page_params = dict(params)
        if offset:
            page_params[PAGE_OFFSET_PARAM] = str(offset)
        payload = _get_json(client, url, page_params, retries)
        data = payload.get("data")
        if not isinstance(data, list):
            raise FetchError(f"{url}: response has no 'data' list")
        rows.extend(data)
        if not payload.get("next") or not data:
            return rows
        offset += len(data)


def _as_int(value, where: str) -> int:
    # the API serializes big integers as strings
    if isinstance(value, bool):
        raise FetchError(f"{where}: expected an integer, got a bool")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            pass
    raise FetchError(f"{where}: expected an integer, got {value!r}")


def _field_poly(raw, label: str) -> IntPoly:
    if raw in (None, []):
        # rational class: the eigenvalue field is Q, presented as the root of x
        return IntPoly([0, 1])
    if not isinstance(raw, list):
        raise FetchError(f"{label}: field_poly is not a list")
    coeffs = [_as_int(c, f"{label}.field_poly") for c in raw]
    poly = IntPoly(coeffs)
    if not poly.is_monic:
        # source stores coefficients constant-term first; a monic reversed
        # list means the order was the other way around
        rev = IntPoly(list(reversed(coeffs)))
        if rev.is_monic:
            poly = rev
        else:
            raise FetchError(f"{label}: field_poly is not monic in either order")
    return poly


def _translate_class(meta: dict, hecke: dict, level: int) -> NewformClass:
    label = meta.get("label") or "?"
    poly = _field_poly(meta.get("field_poly") or hecke.get("field_poly"), label)
    K = NumberField(poly)
    if K.degree > 1 and not hecke.get("hecke_ring_power_basis", False):
        raise FetchError(
            f"{label}: eigenvalues are not stored in the power basis of the "
            "field polynomial; conversion is out of scope, refusing the data"
        )
    maxp = hecke.get("maxp")
    if maxp is not None and _as_int(maxp, f"{label}.maxp") < REQUIRED_PRIME_BOUND:
        raise DataGapError(
            f"{label}: source only has a_p up to {maxp}, need {REQUIRED_PRIME_BOUND}"
        )
    ap_rows = hecke.get("ap")
    if not isinstance(ap_rows, list):
        raise FetchError(f"{label}: missing ap data")
    primes = [p for p in range(2, 10**6) if is_prime(p)][: len(ap_rows)]
    ap = {}
    for p, row in zip(primes, ap_rows):
        if p > REQUIRED_PRIME_BOUND:
            break
        if not isinstance(row, list):
            raise FetchError(f"{label}: a_{p} row is not a list")
        coords = []
        for c in row:
            if isinstance(c, list):
                if len(c) != 2:
                    raise FetchError(f"{label}: a_{p} coordinate {c!r} malformed")
                coords.append(Fraction(_as_int(c[0], label), _as_int(c[1], label)))
            else:
                coords.append(Fraction(_as_int(c, f"{label}.a_{p}")))
        if len(coords) != K.degree:
            raise FetchError(
                f"{label}: a_{p} has {len(coords)} coordinates for degree {K.degree}"
            )
        ap[p] = K.elem(coords)
    missing = [p for p in sieve_primes_for_level(level) if p not in ap]
    if missing:
        raise DataGapError(f"{label}: source data lacks a_p for p in {missing}")
    return NewformClass(level=level, label=label, field=K, ap=ap)


def fetch_remote(
    level: int,
    out_path,
    *,
    base_url: str = DEFAULT_BASE_URL,
    client: httpx.Client | None = None,
    retries: int = 3,
    timeout: float = 60.0,
) -> Path:
    """Download all weight-2 trivial-character classes at `level` and write
    the canonical level file to `out_path` (atomically; a failed fetch never
    leaves a partial file). An empty result at the level is not an error."""
    out_path = Path(out_path)
    own_client = client is None
    if own_client:
        client = httpx.Client(base_url=base_url, timeout=timeout)
    try:
        meta_rows = _paged_data(
            client,
            NEWFORMS_ENDPOINT,
            {**NEWFORMS_QUERY, "level": str(level)},
            retries,
        )
        classes = []
        for meta in sorted(meta_rows, key=lambda r: str(r.get("label"))):
            label = meta.get("label")
            if not isinstance(label, str) or not label:
                raise FetchError(f"class row without a label at level {level}")
            hecke_rows = _paged_data(
                client, HECKE_ENDPOINT, {**HECKE_QUERY, "label": label}, retries
            )
            if len(hecke_rows) != 1:
                raise FetchError(f"{label}: expected one eigenvalue row, got {len(hecke_rows)}")
            classes.append(_translate_class(meta, hecke_rows[0], level))
    finally:
        if own_client:
            client.close()
    try:
        provenance = {"source": f"{base_url}{NEWFORMS_ENDPOINT}?level={level}"}
        return write_level_file(out_path, level, classes, provenance)
    except SchemaError as exc:  # pragma: no cover - canonical writer output
        raise FetchError(str(exc)) from exc
