"""Prediction side: truncated series, prime sums and the ratios recipe."""
from .primesums import (A2_closed, A4_value, A_two, B_alpha, B_truncated, PrimeSum,  # noqa: F401
                        zeta_q)
from .recipe import (A2_factor, PoleProximityError, PredictionBreakdown, R1_series,  # noqa: F401
                     R23_series, R4_series, T2_series, TAIL_VARIANTS, mathcalA_series,
                     mathcalB_series, mathcalC_series, predict_one_level, predict_two_level,
                     ratio_recipe)
from .series import PowerSeries, perron_contour, perron_extract  # noqa: F401
