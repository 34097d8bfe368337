"""Built-in accuracy presets standing in for trained tables.

Each preset is a saturating-exponential curve for one (dataset, model,
SNR) triple, so simulations and sweeps run without any trained model
output. Harder datasets saturate lower and noisier channels climb slower;
with arrivals at 0.09 per channel use the presets place the optimal
codeword length at 5/4/4 (MNIST, either model) and 6/5/4 (CIFAR10) across
0/3/5 dB, decreasing as the channel improves.

Tables produced by the trainer can be dropped in anywhere a preset curve
is accepted; see :func:`taskage.accuracy.load_tables`.
"""

from __future__ import annotations

from .accuracy import AccuracyCurve, Dataset, ModelKind, ParametricCurve, synth_curve
from .errors import ConfigError

SNR_GRID_DB = (0.0, 3.0, 5.0)
NC_GRID = tuple(range(1, 17))

PRESET_PARAMS = {
    (Dataset.MNIST, ModelKind.FNN, 0.0): ParametricCurve(0.88, 0.22),
    (Dataset.MNIST, ModelKind.FNN, 3.0): ParametricCurve(0.93, 0.32),
    (Dataset.MNIST, ModelKind.FNN, 5.0): ParametricCurve(0.96, 0.38),
    (Dataset.MNIST, ModelKind.CNN, 0.0): ParametricCurve(0.93, 0.22),
    (Dataset.MNIST, ModelKind.CNN, 3.0): ParametricCurve(0.965, 0.33),
    (Dataset.MNIST, ModelKind.CNN, 5.0): ParametricCurve(0.985, 0.40),
    (Dataset.CIFAR10, ModelKind.CNN, 0.0): ParametricCurve(0.72, 0.18),
    (Dataset.CIFAR10, ModelKind.CNN, 3.0): ParametricCurve(0.78, 0.26),
    (Dataset.CIFAR10, ModelKind.CNN, 5.0): ParametricCurve(0.84, 0.34),
}


def preset_curve(dataset, model, snr_db, n_c_grid=NC_GRID):
    """Tabulated preset for one (dataset, model, SNR) triple."""
    key = (Dataset(dataset), ModelKind(model), float(snr_db))
    try:
        params = PRESET_PARAMS[key]
    except KeyError:
        known = ", ".join(
            f"{d.value}/{m.value}/{s:g}" for d, m, s in sorted(
                PRESET_PARAMS, key=lambda k: (k[0].value, k[1].value, k[2])))
        raise ConfigError(
            f"no preset for {key[0].value}/{key[1].value}/{snr_db:g} dB; "
            f"available: {known}") from None
    return synth_curve(params, n_c_grid, dataset=key[0], model=key[1],
                       snr_db=key[2])


def preset_curves():
    """All presets, deterministically ordered."""
    keys = sorted(PRESET_PARAMS, key=lambda k: (k[0].value, k[1].value, k[2]))
    return [preset_curve(*k) for k in keys]
