from enum import IntEnum

from hio_framework.system.errors import RatingRangeError

RATING_MIN = 1.0
RATING_MAX = 7.0
NEGATIVE_BELOW = 3.0
POSITIVE_ABOVE = 5.0


class TraitClass(IntEnum):
    NEGATIVE = 0
    NEUTRAL = 1
    POSITIVE = 2


N_CLASSES = len(TraitClass)


def ternary_label(avg_rating: float) -> TraitClass:
    """Below 3 is negative, above 5 positive, [3, 5] inclusive neutral."""
    if not RATING_MIN <= avg_rating <= RATING_MAX:
        raise RatingRangeError(
            f"rating {avg_rating} outside [{RATING_MIN:g}, {RATING_MAX:g}]"
        )
    if avg_rating < NEGATIVE_BELOW:
        return TraitClass.NEGATIVE
    if avg_rating > POSITIVE_ABOVE:
        return TraitClass.POSITIVE
    return TraitClass.NEUTRAL
