from . import *
import numpy as np

SCALING_PROCESSES = ('time_changed', 'scaled', 'rescaled_path')


@dataclass
class MomentSummary:
    mean: float
    var: float
    mean_se: float
    var_se: float

    @classmethod
    def from_samples(cls, x):
        x = np.asarray(x, dtype=float)
        n = len(x)
        mean = float(x.mean())
        var = float(x.var(ddof=1))
        m4 = float(np.mean((x - mean) ** 4))
        return cls(mean=mean, var=var, mean_se=math.sqrt(var / n), var_se=math.sqrt(max(m4 - var * var, 0.0) / n))


@dataclass
class ScalingReport:
    J: Word
    eps: float
    nsamples: int
    size: int
    alpha: float
    moments: Dict[str, MomentSummary]
    z_mean: Dict[str, float]
    z_var: Dict[str, float]

    def to_frame(self):
        import pandas as pd

        return pd.DataFrame(
            [{'process': k, **v.__dict__} for k, v in self.moments.items()]
        ).assign(word=word_str(self.J), eps=self.eps)


def _z(a: MomentSummary, b: MomentSummary, attr):
    se = math.hypot(getattr(a, f'{attr}_se'), getattr(b, f'{attr}_se'))
    diff = getattr(a, attr) - getattr(b, attr)
    return diff / se if se > 0 else (0.0 if diff == 0 else math.inf)


@log.debug
def verify_scaling(J, eps: float, nsamples: int, seed: int, N: int = 64) -> ScalingReport:
    """
    Sample the three processes that share a law under Brownian scaling: W^J at time
    eps^2, eps^size(J) W^J at time 1, and W^J of the path eps^alpha(J) w at time 1.
    Each uses its own Philox stream. Reports moments and pairwise z-scores.
    """
    J = as_word(J)
    if nsamples < 1000:
        raise SchemaError(f'nsamples must be >= 1000, got {nsamples}')
    st = word_stats(J)
    m = max(max(J), 1)
    moments = {}

    incs = brownian_increments(nsamples, m, N, seed, stream=1, T=eps * eps)
    moments['time_changed'] = MomentSummary.from_samples(batch_iterated_integrals(incs, eps * eps / N, len(J), [J])[J])

    incs = brownian_increments(nsamples, m, N, seed, stream=2)
    scaled = eps ** st.size * batch_iterated_integrals(incs, 1.0 / N, len(J), [J])[J]
    moments['scaled'] = MomentSummary.from_samples(scaled)

    if st.n:
        incs = brownian_increments(nsamples, m, N, seed, stream=3) * eps ** float(st.alpha)
        moments['rescaled_path'] = MomentSummary.from_samples(batch_iterated_integrals(incs, 1.0 / N, len(J), [J])[J])

    z_mean, z_var = {}, {}
    for a, b in itertools.combinations([p for p in SCALING_PROCESSES if p in moments], 2):
        z_mean[f'{a}-{b}'] = _z(moments[a], moments[b], 'mean')
        z_var[f'{a}-{b}'] = _z(moments[a], moments[b], 'var')
    return ScalingReport(
        J=J, eps=eps, nsamples=nsamples, size=st.size, alpha=float(st.alpha),
        moments=moments, z_mean=z_mean, z_var=z_var,
    )
