"""dwlab: numerics for multiplier-algebra ideal problems on weighted Dirichlet spaces."""

from .series import BiDegreeSeries, PowerSeries, VectorSeries, WeightParam

__version__ = "0.1.0"


def __getattr__(name):
    # lazy re-exports of the heavier submodules
    import importlib

    for mod in ("quadrature", "space", "rotation", "transforms", "koszul", "solver"):
        module = importlib.import_module(f".{mod}", __name__)
        if hasattr(module, name):
            return getattr(module, name)
    raise AttributeError(name)


__all__ = [
    "BiDegreeSeries",
    "PowerSeries",
    "VectorSeries",
    "WeightParam",
    "__version__",
]
