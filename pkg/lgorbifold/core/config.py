import os
from fractions import Fraction

GROUP_ORDER_CAP = int(os.getenv("LGORBIFOLD_GROUP_ORDER_CAP", "10000"))
DEGREE_WINDOW_SLACK = Fraction(os.getenv("LGORBIFOLD_DEGREE_WINDOW_SLACK", "0"))
MAX_WINDOW_WIDENINGS = int(os.getenv("LGORBIFOLD_MAX_WINDOW_WIDENINGS", "16"))
LOG_LEVEL = os.getenv("LGORBIFOLD_LOG_LEVEL", "WARNING").upper()
