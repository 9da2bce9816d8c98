"""Record which recorded assumptions each check actually consumes."""

from contextlib import contextmanager

from forge import bundles, forms, quotients, suite
from forge.reports import MAYER_VIETORIS, NOVIKOV, PUSHOFF


@contextmanager
def consumption_probe(monkeypatch):
    used: set[str] = set()
    real_sp, real_double, real_nov = bundles.surgery_presentation, quotients.double_report, forms.novikov_sum

    def sp(s, *a, **k):
        if s.surgeries:
            used.add(PUSHOFF.label)
        return real_sp(s, *a, **k)

    def double(d):
        out = real_double(d)
        used.add(MAYER_VIETORIS.label)
        if out.signature is not None:
            used.add(NOVIKOV.label)
        return out

    def nov(parts):
        used.add(NOVIKOV.label)
        return real_nov(parts)

    monkeypatch.setattr(bundles, "surgery_presentation", sp)
    monkeypatch.setattr(quotients, "double_report", double)
    monkeypatch.setattr(forms, "novikov_sum", nov)
    yield used


def hidden_assumptions(monkeypatch, bound=suite.DEFAULT_BOUND):
    """``{check id: labels consumed but not listed}``, restricted to checks with something hidden."""
    ws = suite.Workspace.default()
    hidden = {}
    for spec in suite.CHECKS:
        with consumption_probe(monkeypatch) as used:
            res = suite.run_check(spec, ws, bound, timing=False)
        monkeypatch.undo()
        listed = {a.split(":", 1)[0] for a in res.assumptions}
        missing = used - listed
        if missing:
            hidden[spec.id] = sorted(missing)
    return hidden
