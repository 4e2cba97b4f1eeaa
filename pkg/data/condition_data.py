# Implication graph between the twelve optimality notions.
# (antecedent, consequent, hypothesis, mode)
#   pointwise      A(x) => B(x) at every tested x
#   radial-exact   B failing at x forces A to fail at some x0 + t(x - x0), t below the first kink
#   radial-search  as above, but the failing aux point is only searched for
#   split          pointwise at non-tie points of dom f, radial-exact at ties and off dom f

POINTWISE = "pointwise"
RADIAL_EXACT = "radial-exact"
RADIAL_SEARCH = "radial-search"
SPLIT = "split"

# hypotheses, evaluated per point or once per instance
NO_HYPOTHESIS = ""
WR_AT_X0 = "WR(x0, x-x0)"
SR_AT_X0 = "SR(x0, x-x0)"
SR_AT_X = "SR(x, x0-x)"
MSTAR_SEARCH = "finite M*"
LSC_PROBE = "bstar-lsc at x0"
COMPACT_VALUE = "0+f(x0) = C"
CONTINUOUS_VECTOR = "C-continuous vector extension"

IMPLICATION_EDGES = [
    ("svi_M", "SVI_M", NO_HYPOTHESIS, POINTWISE),
    ("SVI_M", "Min", NO_HYPOTHESIS, POINTWISE),
    ("Min", "mvi_M", NO_HYPOTHESIS, POINTWISE),
    ("MVI_M", "mvi_M", NO_HYPOTHESIS, POINTWISE),
    ("svi_W", "w-sc-Min", NO_HYPOTHESIS, POINTWISE),
    ("w-sc-Min", "mvi_W", NO_HYPOTHESIS, POINTWISE),
    ("MVI_M", "mvi_W", NO_HYPOTHESIS, POINTWISE),
    ("svi_W", "SVI_W", NO_HYPOTHESIS, POINTWISE),
    ("SVI_W", "w-Min", NO_HYPOTHESIS, POINTWISE),
    ("w-l-Min", "w-sc-Min", NO_HYPOTHESIS, POINTWISE),
    ("w-sc-Min", "w-Min", NO_HYPOTHESIS, POINTWISE),
    ("mvi_M", "mvi_W", NO_HYPOTHESIS, POINTWISE),
    ("MVI_M", "MVI_W", NO_HYPOTHESIS, POINTWISE),
    ("Min", "w-Min", NO_HYPOTHESIS, POINTWISE),
    ("w-Min", "SVI_W", NO_HYPOTHESIS, RADIAL_EXACT),
    ("SVI_M", "SVI_W", NO_HYPOTHESIS, SPLIT),
    ("svi_M", "svi_W", NO_HYPOTHESIS, SPLIT),
    ("SVI_M", "svi_M", WR_AT_X0, POINTWISE),
    ("mvi_M", "MVI_M", SR_AT_X, POINTWISE),
    ("mvi_W", "MVI_W", SR_AT_X, POINTWISE),
    ("SVI_W", "svi_W", SR_AT_X0, POINTWISE),
    ("w-sc-Min", "svi_W", SR_AT_X0, RADIAL_EXACT),
    ("w-sc-Min", "svi_W", MSTAR_SEARCH, RADIAL_SEARCH),
    ("w-sc-Min", "svi_W", COMPACT_VALUE, RADIAL_SEARCH),
    ("mvi_M", "Min", LSC_PROBE, RADIAL_SEARCH),
    ("mvi_W", "w-sc-Min", LSC_PROBE, RADIAL_SEARCH),
    ("w-Min", "w-l-Min", COMPACT_VALUE, POINTWISE),
    ("mvi_M", "Min", CONTINUOUS_VECTOR, RADIAL_SEARCH),
    ("mvi_W", "w-Min", CONTINUOUS_VECTOR, RADIAL_SEARCH),
]

# antecedents whose truth on all of X forces f to be constant on [x0, x] at every tie
CONSTANCY_ANTECEDENTS = ["SVI_M", "svi_M"]
