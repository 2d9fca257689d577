from . import *
import numpy as np


class DiffusionSystem:
    """
    Controlled system dx = eps^2 X_0(x) dt + eps sum_i X_i(x) dh^i from x0.
    fields[0] is the drift X_0; every field maps (..., n) arrays to (..., n).
    Module-level callables keep a system picklable for pmap.
    """

    def __init__(self, fields: Sequence[Callable], x0, name: str = '', algebra: Optional[LieAlgebraSpec] = None):
        self.fields = tuple(fields)
        if len(self.fields) < 2:
            raise SchemaError('A system needs a drift and at least one driving field')
        self.x0 = np.asarray(x0, dtype=float)
        self.name = name
        self.algebra = algebra

    @classmethod
    def from_algebra(cls, L: LieAlgebraSpec, x0=None, name=None):
        fields = L.generator_fields()
        x0 = np.zeros(L.state_dim) if x0 is None else x0
        return cls(fields, x0, name=name or L.name, algebra=L)

    @property
    def m(self):
        return len(self.fields) - 1

    @property
    def n(self):
        return len(self.x0)

    def velocity(self, x, hdot, eps=1.0, drift_weight=1.0):
        """eps^2 drift_weight X_0(x) + eps sum_i hdot_i X_i(x) for batches x (..., n), hdot (..., m)."""
        hdot = np.asarray(hdot, dtype=float)
        out = (drift_weight * eps * eps) * self.fields[0](x)
        for i, X in enumerate(self.fields[1:]):
            out = out + eps * hdot[..., i : i + 1] * X(x)
        return out

    def endpoints(self, hdot, eps=1.0, drift_weight=1.0, substeps=8):
        """
        Endpoints under piecewise-constant controls: hdot has shape (batch, K, m)
        on K even pieces of [0, 1]; RK4 with `substeps` steps per piece.
        """
        hdot = np.asarray(hdot, dtype=float)
        if hdot.ndim == 2:
            hdot = hdot[None]
        batch, K, _ = hdot.shape
        x = np.broadcast_to(self.x0, (batch, self.n)).copy()
        h = 1.0 / (K * substeps)
        for k in range(K):
            u = hdot[:, k, :]
            f = lambda y: self.velocity(y, u, eps, drift_weight)
            for _ in range(substeps):
                k1 = f(x)
                k2 = f(x + 0.5 * h * k1)
                k3 = f(x + 0.5 * h * k2)
                k4 = f(x + h * k3)
                x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        return x

    def __repr__(self):
        return f'DiffusionSystem(name={self.name!r}, n={self.n}, m={self.m})'


def solvable_drift(x):
    """exp(x_1) d/dx_2."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    out[..., 1] = np.exp(x[..., 0])
    return out


def unit_first(x):
    """d/dx_1."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    out[..., 0] = 1.0
    return out


def kolmogorov_system() -> DiffusionSystem:
    return DiffusionSystem.from_algebra(load_algebra('kolmogorov'), name='kolmogorov')


def heisenberg_system() -> DiffusionSystem:
    return DiffusionSystem.from_algebra(load_algebra('heisenberg'), name='heisenberg')


def solvable_system() -> DiffusionSystem:
    """(eps w, eps^2 int exp(eps w) ds); not nilpotent, so it carries no algebra."""
    return DiffusionSystem((solvable_drift, unit_first), np.zeros(2), name='solvable')


SYSTEM_BUILDERS = {
    'kolmogorov': kolmogorov_system,
    'heisenberg': heisenberg_system,
    'solvable': solvable_system,
}


def get_system(name) -> DiffusionSystem:
    if name not in SYSTEM_BUILDERS:
        raise SchemaError(f'Invalid system: {name}. Options: {", ".join(SYSTEM_BUILDERS)}.')
    return SYSTEM_BUILDERS[name]()
