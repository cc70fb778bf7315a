"""
File formats. Every document is a StrictRecord, so reading a file runs the
same field validation as building a record by hand, and writing one goes
through the records' simplified form (JSON or msgpack).

Urn file:

    {"colours": ["red", "blue"],
     "activities": ["1", "1/2"],
     "initial": [1, 1],
     "replacements": [[{"prob": "1", "delta": {"red": 1}}],
                      [{"prob": "1/2", "delta": {"blue": -1, "red": 2}},
                       {"prob": "1/2", "delta": {}}]]}

Delta keys name colours by label; a key that is not a label but an integer
is read as a colour index.
"""
import logging

from .. import api
from .. import fields as f
from ..algebra import product
from ..errors import ShapeMismatch
from ..strictbase import StrictRecord
from ..urn import make_urn

log = logging.getLogger(__name__)


class AtomDocument(StrictRecord):
    prob = api.ref(f.Rational)
    delta = api.ref(f.MapField, f.StringInt(), f.Int())


class UrnDocument(StrictRecord):
    colours = api.slist(f.String)
    activities = api.slist(f.NonNegativeRational)
    initial = api.slist(f.Int)
    replacements = api.slist(f.ListField, api.ref(AtomDocument))


# factors of a product urn are urn documents themselves
UrnDocument.__fields__['factors'] = api.optlist(UrnDocument)


class GraphDocument(StrictRecord):
    vertices = api.ref(f.NonNegativeInt)
    edges = api.slist(f.IntPair)


class SpectrumEntry(StrictRecord):
    re = api.ref(f.Float)
    im = api.ref(f.Float)
    mult = api.ref(f.NonNegativeInt)


class LawOutcomeDocument(StrictRecord):
    # "pass" is a keyword, so it can't be a class attribute
    __fields__ = {'pass': api.ref(f.Bool)}
    trial = api.opt(f.Int)
    counterexample = api.optlist(UrnDocument)
    matrices = api.optlist(f.ListField, api.ref(f.ListField, api.ref(f.Rational)))


class LawReportDocument(StrictRecord):
    trials = api.ref(f.NonNegativeInt)
    passed = api.ref(f.Bool)
    laws = api.ref(f.MapField, f.String(), api.ref(LawOutcomeDocument))
    qualifying = api.opt(f.MapField, f.String(), f.NonNegativeInt())


def urn_to_document(urn):
    labels = urn.colour_labels()
    replacements = []
    for measure in urn.measures:
        replacements.append([
            {'prob': p,
             'delta': {labels[j]: x for j, x in enumerate(inc) if x}}
            for inc, p in measure.atoms])
    data = dict(colours=labels, activities=urn.activities,
                initial=urn.initial, replacements=replacements)
    if urn.factors is not None:
        data['factors'] = [urn_to_document(factor) for factor in urn.factors]
    return UrnDocument(**data)


def _colour_index(key, index, q, path):
    if key in index:
        return index[key]
    try:
        j = int(key)
    except ValueError:
        raise ShapeMismatch('unknown colour {0!r}'.format(key), path=path)
    if not 0 <= j < q:
        raise ShapeMismatch('unknown colour {0!r}'.format(key), path=path)
    return j


def urn_from_document(doc):
    """Validated PolyaUrn from an UrnDocument; product metadata is rebuilt."""
    labels = doc.colours
    q = len(labels)
    index = {label: i for i, label in enumerate(labels)}
    if len(index) != q:
        raise ShapeMismatch('colour labels are not distinct', path=['colours'])
    if len(doc.replacements) != q:
        raise ShapeMismatch('replacements has {0} entries for {1} colours'.format(
            len(doc.replacements), q), path=['replacements'])
    measures = []
    for i, atoms in enumerate(doc.replacements):
        measure = []
        for k, atom in enumerate(atoms):
            path = [k, i, 'replacements']
            delta = {_colour_index(key, index, q, path): x
                     for key, x in atom.delta.items()}
            measure.append((delta, atom.prob))
        measures.append(measure)
    urn = make_urn(q, measures, doc.activities, doc.initial, labels)
    if doc.factors:
        urn = _attach_factors(urn, doc.factors)
    return urn


def _attach_factors(urn, factor_docs):
    if len(factor_docs) != 2:
        raise ShapeMismatch('a product has two factors, not {0}'.format(len(factor_docs)),
                            path=['factors'])
    rebuilt = product(*(urn_from_document(d) for d in factor_docs))
    if rebuilt != urn:
        raise ShapeMismatch('factors do not multiply to this urn', path=['factors'])
    return rebuilt.with_labels(urn.labels)


def parse_urn(data_str, msg_pack=False):
    return urn_from_document(UrnDocument.parse(data_str, msg_pack=msg_pack))


def dump_urn(urn, msg_pack=False, indent=None):
    return urn_to_document(urn).to_string(msg_pack=msg_pack, indent=indent)


def read_urn(path, msg_pack=False):
    mode = 'rb' if msg_pack else 'r'
    with open(path, mode) as fh:
        data = fh.read()
    log.debug('read urn file %s', path)
    return parse_urn(data, msg_pack=msg_pack)


def write_urn(urn, path, msg_pack=False, indent=2):
    data = dump_urn(urn, msg_pack=msg_pack, indent=None if msg_pack else indent)
    with open(path, 'wb' if msg_pack else 'w') as fh:
        fh.write(data)


def law_report_to_document(report):
    """LawReport -> LawReportDocument; urn operands and matrix operands both fit."""
    laws = {}
    for name, outcome in report.laws.items():
        data = {'pass': outcome.passed, 'trial': outcome.trial}
        operands = outcome.counterexample or ()
        if any(hasattr(op, 'measures') for op in operands):
            data['counterexample'] = [urn_to_document(op) for op in operands]
        elif operands:
            data['matrices'] = [[list(row) for row in op] for op in operands]
        laws[name] = data
    extra = {'qualifying': dict(report.qualifying)} if report.qualifying else {}
    return LawReportDocument(trials=report.trials, passed=report.passed, laws=laws,
                             **extra)
