"""
Simplifiers are serializers of sort: they transform (.serialize()) objects to
simpler format understood by JSON and msgpack (ints, strings, lists and dicts
mostly) and transform them back (.deserialize()) to python objects, but
perform no checks, so input is supposed to be valid
"""
from fractions import Fraction


class NullSimplifier(object):
    @staticmethod
    def serialize(data):
        return data

    @staticmethod
    def deserialize(data_str):
        return data_str


class RationalSimplifier(object):
    @staticmethod
    def serialize(data):
        if data.denominator == 1:
            return str(data.numerator)
        return '{0}/{1}'.format(data.numerator, data.denominator)

    @staticmethod
    def deserialize(data_str):
        return Fraction(data_str)


class PairSimplifier(object):
    @staticmethod
    def serialize(data):
        return [data[0], data[1]]

    @staticmethod
    def deserialize(data_str):
        return (data_str[0], data_str[1])


def record_simplifier(record_class):
    class RecordSimplifier(object):
        @staticmethod
        def serialize(obj):
            return obj.simplify()

        @classmethod
        def deserialize(cls, data_str):
            data = record_class.restore(data_str)
            return data

    return RecordSimplifier
