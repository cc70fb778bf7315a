"""
Validators check values on record construction and do coercion if needed
"""
import numbers
from fractions import Fraction


class ValidationError(Exception):

    def __init__(self, message, class_=None, path=None, value=None,
                 errors=None, *args, **kwargs):
        if errors is None:
            errors = []
        self.errors = errors
        self.path = path or []
        self.value = value
        self.class_ = class_
        self.message = message
        super(ValidationError, self).__init__(*args, **kwargs)

    def __str__(self):
        clsname = self.class_.__name__ if self.class_ else '<No class>'
        path_display = ".".join([str(clsname)] + [str(p) for p in reversed(self.path)])
        return "Failed to validate {0} as {1}: {2}".format(
            self.value, path_display, self.message)


def SimpleTypeValidator(_type, error_classes=[ValueError]):
    def validator(data):
        error_msg = "Failed to validate as %s" % _type
        try:
            return _type(data)
        except tuple(error_classes) as e:
            raise ValidationError("{0}: {1}".format(error_msg, e))
        except TypeError as e:
            raise ValidationError("{0}: {1}".format(error_msg, e))
    return validator


def StringValidator(data):
    if isinstance(data, str):
        return data
    raise ValidationError('Not a string')


def StringIntValidator(data):
    if isinstance(data, str):
        return data
    if isinstance(data, int) and not isinstance(data, bool):
        return str(data)
    raise ValidationError('Not a string')


def IntValidator(data):
    if isinstance(data, bool):
        raise ValidationError('Booleans are not integers')
    if isinstance(data, float):
        raise ValidationError('Floats not allowed')
    return SimpleTypeValidator(int)(data)


def NonNegativeIntValidator(data):
    value = IntValidator(data)
    if value < 0:
        raise ValidationError('Negative value {0}'.format(value))
    return value


def FloatValidator(data):
    if isinstance(data, bool):
        raise ValidationError('Booleans are not floats')
    return SimpleTypeValidator(float)(data)


def RationalValidator(data):
    """
    Exact rationals: ints, Fractions, integer strings and "p/q" strings.
    Floats are refused, they would smuggle binary rounding into exact data.
    """
    if isinstance(data, bool):
        raise ValidationError('Booleans are not rationals')
    if isinstance(data, Fraction):
        return data
    if isinstance(data, numbers.Integral):
        return Fraction(int(data))
    if isinstance(data, str):
        try:
            return parse_rational(data)
        except (ValueError, ZeroDivisionError) as e:
            raise ValidationError('Not a rational [%s, %s]' % (data, e,))
    raise ValidationError('Not a rational [%r]' % (data,))


def NonNegativeRationalValidator(data):
    value = RationalValidator(data)
    if value < 0:
        raise ValidationError('Negative value {0}'.format(value))
    return value


def IntPairValidator(data):
    if isinstance(data, (str, bytes)) or not hasattr(data, '__len__'):
        raise ValidationError('Not a pair [%r]' % (data,))
    if len(data) != 2:
        raise ValidationError('Pair must have two entries [%r]' % (data,))
    return (IntValidator(data[0]), IntValidator(data[1]))


def parse_rational(s):
    parts = s.strip().split('/')
    if len(parts) == 1:
        return Fraction(int(parts[0]))
    if len(parts) == 2:
        den = int(parts[1])
        if den == 0:
            raise ZeroDivisionError('zero denominator')
        return Fraction(int(parts[0]), den)
    raise ValueError('Invalid rational format')
