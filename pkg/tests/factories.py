import factory

from gsws.schemas.potential import MwsParams, PotentialParams


class PotentialParamsFactory(factory.Factory):
    """Factory for potential parameters; defaults are the reference set."""

    class Meta:
        model = PotentialParams

    v0 = 100.0
    w0 = 250.0
    a = 1.0
    L = 6.0
    mc2 = 940.0
    hbarc = 197.329


class MwsParamsFactory(factory.Factory):
    """Factory for modified Woods-Saxon parameters."""

    class Meta:
        model = MwsParams

    v0 = 100.0
    a = 1.0
    L = 6.0
    p = factory.Iterator([1, 2, 3])
    q = factory.Iterator([1, 1, 2])
