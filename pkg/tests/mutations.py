"""Single-field mutation sweep over the bundled mirror tables."""

from k3mirror.verify import load_tables, mutate, verify_mirrors

KINDS = ("r", "epsilon", "dual")


def sites(data):
    for tab in data["tables"]:
        for row in tab["rows"]:
            for i, _ in enumerate(row["entries"]):
                for kind in KINDS:
                    yield kind, tab["m"], row["id"], i


def check_site(data, kind, m, row_id, index):
    """``(applicable, detected, localized)`` for one mutation."""
    bad = mutate(data, kind, m, row_id, index)
    if bad is None:
        return False, False, False
    tab = next(t for t in bad["tables"] if t["m"] == m)
    row = next(r for r in tab["rows"] if r["id"] == row_id)
    entry = row["entries"][index]
    original = next(r for r in next(t for t in data["tables"] if t["m"] == m)["rows"] if r["id"] == row_id)
    wanted = {row_id, entry["dual"], original["entries"][index]["dual"]}
    rep = verify_mirrors(m, bad, rows=wanted)
    failing = [o for o in rep.outcomes if not o.ok]
    localized = any(
        o.where.get("table") == m and o.where.get("row") == row_id and o.where.get("g_over_j") == entry["g_over_j"]
        for o in failing
    )
    return True, bool(failing), localized


def sweep(data=None, limit=None):
    data = data or load_tables()
    out = []
    for n, site in enumerate(sites(data)):
        if limit is not None and n >= limit:
            break
        out.append((site, *check_site(data, *site)))
    return out
