"""
Shorthands for declaring record fields:

    class AtomDocument(StrictRecord):
        prob = api.ref(f.Rational)
        delta = api.ref(f.MapField, api.ref(f.StringInt), api.ref(f.Int))

Passing a StrictRecord subclass instead of a field class yields a nested
RecordField.
"""
from .. import fields as f
from ..strictbase import StrictRecord


def strict_field_helper(f_class, *args, **kwargs):
    if isinstance(f_class, type) and issubclass(f_class, StrictRecord):
        return f.RecordField(f_class, *args, **kwargs)

    return f_class(*args, **kwargs)


def _declare(f_class, args, kwargs, required, is_list):
    kwargs['required'] = required
    kwargs['is_list'] = is_list
    return strict_field_helper(f_class, *args, **kwargs)


def opt(f_class, *args, **kwargs):
    return _declare(f_class, args, kwargs, required=False, is_list=False)


def ref(f_class, *args, **kwargs):
    return _declare(f_class, args, kwargs, required=True, is_list=False)


def optlist(f_class, *args, **kwargs):
    return _declare(f_class, args, kwargs, required=False, is_list=True)


def slist(f_class, *args, **kwargs):
    return _declare(f_class, args, kwargs, required=True, is_list=True)
