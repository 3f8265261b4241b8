from gsws.schemas.potential import MwsParams, PotentialParams

__all__ = ["MwsParams", "PotentialParams"]
