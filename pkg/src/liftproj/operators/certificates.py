"""Certificate types and condition-by-condition checkers for SA+ and Las."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..combinatorics import Cylinder, IndexFamily, family, popcounts
from ..polytopes import LinearDescription
from ..symmat import DEFAULT_TOL, eigenvalues, symmetrize

SA_CONDITIONS = ("SA+1", "SA+2(i)", "SA+2(ii)", "SA+3", "SA+4", "SA+5", "PSD")
LAS_CONDITIONS = ("Las1", "Las2", "Las3", "PSD")


@dataclass(frozen=True)
class ConditionResult:
    name: str
    passed: bool
    worst: float  # largest violation, 0 when the condition holds exactly
    where: tuple = ()


@dataclass(frozen=True)
class CertificateReport:
    conditions: tuple[ConditionResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def failed(self) -> list[str]:
        return [c.name for c in self.conditions if not c.passed]

    def __getitem__(self, name: str) -> ConditionResult:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "conditions": [
                {"name": c.name, "passed": c.passed, "worst": c.worst, "where": [str(w) for w in c.where]}
                for c in self.conditions
            ],
        }


@dataclass
class SaPlusCertificate:
    n: int
    level: int
    Y: np.ndarray
    family: IndexFamily = field(default=None)

    def __post_init__(self):
        if self.family is None:
            self.family = family(self.n, self.level, "A")
        self.Y = symmetrize(self.Y)
        if self.Y.shape != (len(self.family),) * 2:
            raise ValueError(f"Y has shape {self.Y.shape}, family A_{self.level} has {len(self.family)} members")

    def projected_point(self) -> np.ndarray:
        return _readout(self.Y, self.family)


@dataclass
class LasCertificate:
    n: int
    level: int
    Y: np.ndarray
    description: LinearDescription
    family: IndexFamily = field(default=None)

    def __post_init__(self):
        if self.family is None:
            self.family = family(self.n, self.level + 1, "A+")
        self.Y = symmetrize(self.Y)
        if self.Y.shape != (len(self.family),) * 2:
            raise ValueError(f"Y has shape {self.Y.shape}, family A+_{self.level + 1} has {len(self.family)} members")
        if self.description.n != self.n:
            raise ValueError("description dimension does not match the certificate")

    def projected_point(self) -> np.ndarray:
        return _readout(self.Y, self.family)


def _singleton_positions(fam: IndexFamily) -> np.ndarray:
    pos = []
    for i in range(fam.n):
        c = Cylinder(fam.n, 1 << i, 0)
        pos.append(fam.position(c))
    return np.array(pos, dtype=int)


def _readout(Y: np.ndarray, fam: IndexFamily) -> np.ndarray:
    return Y[0, _singleton_positions(fam)].copy()


def _eq_result(name: str, dev: np.ndarray, tol: float, where) -> ConditionResult:
    if dev.size == 0:
        return ConditionResult(name, True, 0.0)
    i = int(np.argmax(dev))
    worst = float(dev.flat[i])
    return ConditionResult(name, worst <= tol, worst, where(i) if worst > tol else ())


def _psd_result(name: str, a: np.ndarray, tol: float, label=()) -> ConditionResult:
    ev = eigenvalues(a)
    band = tol * max(1.0, abs(ev.largest))
    worst = max(0.0, -ev.smallest)
    ok = ev.smallest >= -band
    return ConditionResult(name, ok, worst, () if ok else label)


def _group_spread(keys: np.ndarray, vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-entry deviation from the maximum of its key group."""
    order = np.argsort(keys, kind="stable")
    k, v = keys[order], vals[order]
    starts = np.concatenate([[0], np.nonzero(np.diff(k))[0] + 1])
    hi = np.maximum.reduceat(v, starts)
    lo = np.minimum.reduceat(v, starts)
    spread = hi - lo
    return spread, k[starts]


def check_sa_plus(cert: SaPlusCertificate, desc: LinearDescription, tol: float = DEFAULT_TOL) -> CertificateReport:
    if desc.n != cert.n:
        raise ValueError("description and certificate dimensions differ")
    fam, Y, n = cert.family, cert.Y, cert.n
    N = len(fam)
    o, z = fam.ones, fam.zeros
    members = fam.members
    pair = lambda flat: (members[flat // N], members[flat % N])  # noqa: E731
    out = []

    out.append(ConditionResult("SA+1", abs(Y[0, 0] - 1) <= tol, abs(Y[0, 0] - 1.0),
                               (members[0], members[0]) if abs(Y[0, 0] - 1) > tol else ()))

    # (i) x̂(Y e_α) ∈ K(P) for every column α
    if cert.level >= 1:
        sing = _singleton_positions(fam)
        x0 = Y[0, :]
        slack = desc.a0[:, None] * x0[None, :] + desc.A @ Y[sing, :]
        viol = np.maximum(-slack.min(axis=0), -x0)
        out.append(_eq_result("SA+2(i)", np.maximum(viol, 0), tol, lambda i: (members[i],)))
    else:
        out.append(ConditionResult("SA+2(i)", True, 0.0))
    out.append(_eq_result("SA+2(ii)", np.maximum(-Y, 0).ravel(), tol, pair))

    # (3) Y e_{α ∩ j|1} + Y e_{α ∩ j|0} = Y e_α for α ∈ A_{k-1}
    dev3, where3 = [0.0], [()]
    sizes = popcounts(o) + popcounts(z)
    for r in np.nonzero(sizes <= cert.level - 1)[0]:
        free = ((1 << n) - 1) & ~int(o[r] | z[r])
        for j in range(n):
            bit = 1 << j
            if free & bit:
                c1 = fam.index[Cylinder(n, int(o[r]) | bit, int(z[r]))]
                c0 = fam.index[Cylinder(n, int(o[r]), int(z[r]) | bit)]
                d = np.abs(Y[:, c1] + Y[:, c0] - Y[:, r]).max()
                if d > dev3[0]:
                    dev3, where3 = [d], [(members[r], j + 1)]
    out.append(ConditionResult("SA+3", dev3[0] <= tol, float(dev3[0]), where3[0] if dev3[0] > tol else ()))

    io = o[:, None] | o[None, :]
    iz = z[:, None] | z[None, :]
    empty = (io & iz) != 0
    out.append(_eq_result("SA+4", np.where(empty, np.abs(Y), 0.0).ravel(), tol, pair))

    keys = np.where(empty, -1, (io << n) | iz).ravel()
    spread, _ = _group_spread(keys, Y.ravel())
    # map spread back to entries for reporting
    order = np.argsort(keys, kind="stable")
    ks = keys[order]
    grp = np.concatenate([[0], np.cumsum(np.diff(ks) != 0)])
    dev5 = np.empty_like(Y.ravel())
    dev5[order] = spread[grp]
    out.append(_eq_result("SA+5", dev5, tol, pair))

    out.append(_psd_result("PSD", Y, tol, ("Y",)))
    return CertificateReport(tuple(out))


def cut_localizers(cert: LasCertificate) -> list[np.ndarray]:
    """Y^i[S, T] = a0·Y[S, T] + Σ_j a_j·Y[S ∪ j, T ∪ j] for every inequality."""
    n, k = cert.n, cert.level
    fam = cert.family
    sub = family(n, k, "A+")
    lookup = np.full(1 << n, -1, dtype=np.int64)
    lookup[fam.ones] = np.arange(len(fam))
    base = lookup[sub.ones]
    shifted = [lookup[sub.ones | (1 << j)] for j in range(n)]
    Y = cert.Y
    blocks = [Y[np.ix_(idx, idx)] for idx in shifted]
    core = Y[np.ix_(base, base)]
    out = []
    for q in cert.description.inequalities:
        loc = q.a0 * core
        for j, aj in enumerate(q.a):
            if aj != 0:
                loc = loc + aj * blocks[j]
        out.append(symmetrize(loc))
    return out


def check_las(cert: LasCertificate, tol: float = DEFAULT_TOL) -> CertificateReport:
    fam, Y, n = cert.family, cert.Y, cert.n
    out = [ConditionResult("Las1", abs(Y[0, 0] - 1) <= tol, abs(Y[0, 0] - 1.0),
                           () if abs(Y[0, 0] - 1) <= tol else (fam[0], fam[0]))]

    worst, where, ok = 0.0, (), True
    for i, loc in enumerate(cut_localizers(cert)):
        r = _psd_result("Las2", loc, tol, (f"inequality {i}",))
        if not r.passed and ok:
            where = r.where
        ok = ok and r.passed
        worst = max(worst, r.worst)
    out.append(ConditionResult("Las2", ok, worst, where))

    sub = family(n, cert.level, "A+")
    idx = np.array([fam.position(c) for c in sub.members], dtype=int)
    block = Y[np.ix_(idx, idx)]
    keys = (sub.ones[:, None] | sub.ones[None, :]).ravel()
    spread, gkeys = _group_spread(keys, block.ravel())
    j = int(np.argmax(spread)) if spread.size else 0
    w3 = float(spread[j]) if spread.size else 0.0
    out.append(ConditionResult("Las3", w3 <= tol, w3, () if w3 <= tol else (f"S∪T mask {int(gkeys[j])}",)))

    out.append(_psd_result("PSD", Y, tol, ("Y",)))
    return CertificateReport(tuple(out))
