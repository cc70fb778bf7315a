import collections.abc
from ..validators import *
from ..simplifiers import *


class Field(object):
    validator = None
    simplifier = None

    def __init__(self, required=True, is_list=False, *args, **kwargs):
        self.required = required
        self.is_list = is_list

    def _validate(self, data):
        return self.validator(data)

    def _validate_list(self, data):
        if isinstance(data, (str, bytes, collections.abc.Mapping)) or \
                not isinstance(data, collections.abc.Iterable):
            raise ValidationError("Is not a list!")
        items = []
        for index, item in enumerate(data):
            try:
                items.append(self._validate(item))
            except ValidationError as exc:
                exc.path.append(index)
                raise exc
        return tuple(items)

    def validate(self, data, key=None):
        try:
            if self.is_list:
                return self._validate_list(data)
            return self._validate(data)
        except ValidationError as exc:
            if not exc.value:
                exc.value = repr(data)
            if key is not None:
                exc.path.append(key)
            exc.class_ = self.__class__
            raise exc

    def serialize(self, data):
        if self.is_empty(data):
            return None
        if self.is_list:
            return [self.simplifier.serialize(item) for item in data]
        return self.simplifier.serialize(data)

    def deserialize(self, serialized):
        if serialized is None:
            return self.empty_value()
        if self.is_list:
            return tuple(
                self.simplifier.deserialize(item) for item in serialized)
        return self.simplifier.deserialize(serialized)

    def is_empty(self, value):
        """
        Check value for being empty
        """
        if value is None:
            return True
        return False

    def empty_value(self):
        """
        What to return when value has not been set
        """
        if self.is_list:
            return tuple()
        return None


class FieldAsIs(Field):
    simplifier = staticmethod(NullSimplifier)


class Bool(FieldAsIs):
    def _validate(self, data):
        if isinstance(data, (bool, int)):
            return bool(data)
        if isinstance(data, str):
            if data.lower() in ('false', '0'):
                return False
            if data.lower() in ('true', '1'):
                return True
        raise ValidationError(
            "Only ints, booleans and strings 'False'' and 'True' are accepted")


class Int(FieldAsIs):
    validator = staticmethod(IntValidator)


class NonNegativeInt(FieldAsIs):
    validator = staticmethod(NonNegativeIntValidator)


class String(FieldAsIs):
    validator = staticmethod(StringValidator)


# colour keys may come as ints from hand-written files
class StringInt(FieldAsIs):
    validator = staticmethod(StringIntValidator)


class Float(FieldAsIs):
    validator = staticmethod(FloatValidator)


class Rational(Field):
    validator = staticmethod(RationalValidator)
    simplifier = staticmethod(RationalSimplifier)


class NonNegativeRational(Rational):
    validator = staticmethod(NonNegativeRationalValidator)


class IntPair(Field):
    validator = staticmethod(IntPairValidator)
    simplifier = staticmethod(PairSimplifier)


class RecordField(Field):
    """
    Validator for a specific StrictRecord subclass
    """

    def __init__(self, class_, *args, **kwargs):
        super(RecordField, self).__init__(*args, **kwargs)
        self.class_ = class_
        self.simplifier = record_simplifier(class_)

    def _validate(self, data):
        if isinstance(data, self.class_):
            return data
        if isinstance(data, collections.abc.Mapping):
            try:
                return self.class_(**data)
            except ValidationError as exc:
                # nested paths travel in .errors, the outer path restarts here
                raise ValidationError(exc.message, errors=exc.errors or
                                      [{'': exc.message}])
        raise ValidationError("Not a valid {}!".format(self.class_.__name__))


class MapField(Field):
    """
    String-keyed mapping whose values are validated by another field
    """

    def __init__(self, key_field, value_field, *args, **kwargs):
        super(MapField, self).__init__(*args, **kwargs)
        self.key_field = key_field
        self.value_field = value_field

    def _validate(self, data):
        if not isinstance(data, collections.abc.Mapping):
            raise ValidationError("Not a mapping!")
        resp = dict()
        for k, v in data.items():
            key = self.key_field.validate(k)
            value = self.value_field.validate(v, key)
            resp[key] = value
        return resp

    def serialize(self, data):
        if self.is_empty(data):
            return None
        return {k: self.value_field.serialize(v) for k, v in data.items()}

    def deserialize(self, serialized):
        if serialized is None:
            return self.empty_value()
        return {k: self.value_field.deserialize(v)
                for k, v in serialized.items()}


class ListField(Field):
    """
    A list whose items are validated by another field; nests inside
    slist() for lists of lists (matrix rows, per-colour atom lists)
    """

    def __init__(self, item_field, *args, **kwargs):
        super(ListField, self).__init__(*args, **kwargs)
        self.item_field = item_field
        self.simplifier = list_simplifier(item_field)

    def _validate(self, data):
        if isinstance(data, (str, bytes, collections.abc.Mapping)) or \
                not isinstance(data, collections.abc.Iterable):
            raise ValidationError("Is not a list!")
        return tuple(self.item_field.validate(item, index)
                     for index, item in enumerate(data))


def list_simplifier(item_field):
    class ListSimplifier(object):
        @staticmethod
        def serialize(items):
            return [item_field.serialize(item) for item in items]

        @staticmethod
        def deserialize(data_str):
            return tuple(item_field.deserialize(item) for item in data_str)

    return ListSimplifier
