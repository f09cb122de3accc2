import argparse
import sys

from modules.covers import cover_invariants, cover_crosscheck
from modules.errors import InvalidArgumentError, InvalidMonodromyError, KnotforgeError, UnknownKnotError
from modules.foxcalc import abelian_phi, alexander_polynomial, rep_from_epimorphism, seifert_alexander, twisted_alexander
from modules.groups import (
    PDCode,
    abelianization,
    bundle_index_subgroup,
    knot_group,
    pd_from_text,
    todd_coxeter,
    torus_bundle_presentation,
    torus_bundle_pullback,
    zero_surgery_presentation,
)
from modules.knot_table import default_table
from modules.logging_utils import log_function_call, app_logger as log
from modules.pipeline import fibered_obstruction_search, symplectic_verdict
from modules.quotients import DEFAULT_CATALOG, catalog, enumerate_epimorphisms
from modules.reports import (
    AlexanderReport,
    BundleReport,
    CoverIndexReport,
    KnotListReport,
    PresentationReport,
    QuotientEntry,
    QuotientsReport,
    SeriesReport,
    TwistedAlexanderReport,
)
from modules.ring import LaurentPoly
from modules.swcalc import SWSeries, is_monic, knot_surgery_sw
from modules.settings import settings


def _euler(text):
    try:
        m, n = (int(v) for v in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected m,n, got {text!r}") from None
    return m, n


def _group_list(text):
    return [name.strip() for name in text.split(',') if name.strip()]


def parse_monodromy(lines, genus):
    """2g SL(2,Z) matrices from lines of four integers each (row-major)."""
    matrices = []
    for line in lines:
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        try:
            a, b, c, d = (int(v) for v in line.split())
        except ValueError:
            raise InvalidMonodromyError(f"expected four integers per matrix, got {line!r}") from None
        matrices.append([[a, b], [c, d]])
    if len(matrices) != 2 * genus:
        raise InvalidMonodromyError(f"genus {genus} needs {2 * genus} matrices, got {len(matrices)}")
    return matrices


def load_monodromy(args):
    if args.monodromy_inline:
        return parse_monodromy(args.monodromy_inline.split(';'), args.genus)
    if args.monodromy == 'id':
        return [[[1, 0], [0, 1]] for _ in range(2 * args.genus)]
    try:
        with open(args.monodromy, 'r', encoding='utf-8') as f:
            return parse_monodromy(f.readlines(), args.genus)
    except OSError as e:
        raise InvalidArgumentError(f"cannot read monodromy file {args.monodromy}: {e}") from None


class KnotforgeCLI:
    """Command-line front end: one subcommand per computation, text or JSON reports."""

    def __init__(self, table=None):
        self.table = table or default_table()
        self.commands = {
            'alex': self.alex,
            'seifert': self.seifert,
            'talex': self.talex,
            'quotients': self.quotients,
            'fibered': self.fibered,
            'surgery-sw': self.surgery_sw,
            'bundle-pi1': self.bundle_pi1,
            'cover-index': self.cover_index,
            'verdict': self.verdict,
            'knots': self.knots,
            'crosscheck': self.crosscheck,
            'presentation': self.presentation,
        }
        self.parser = self.build_parser()

    def build_parser(self):
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--json', action='store_true', help='machine-readable output')

        parser = argparse.ArgumentParser(prog='knotforge', description='Twisted Alexander polynomials, '
                                         'finite covers and SW series for knot surgery on torus bundles')
        sub = parser.add_subparsers(dest='command', required=True)

        def knot_command(name, help_text):
            p = sub.add_parser(name, parents=[common], help=help_text)
            p.add_argument('knot', help='table name (3_1) or PD code X(...);X(...)')
            return p

        def bundle_flags(p):
            p.add_argument('--genus', type=int, required=True)
            p.add_argument('--monodromy', default='id', help="file of 2g lines 'a b c d', or 'id'")
            p.add_argument('--monodromy-inline', dest='monodromy_inline', help="'a b c d;a b c d;...'")
            p.add_argument('--euler', type=_euler, default=(0, 0), help='m,n')

        p = knot_command('alex', 'Alexander polynomial from Fox calculus')
        p.add_argument('--seifert', action='store_true', help='use the table Seifert matrix instead')
        knot_command('seifert', 'Alexander polynomial det(V - tV^T) from the table')

        p = knot_command('talex', 'twisted Alexander polynomial for one epimorphism')
        p.add_argument('--group', required=True)
        p.add_argument('--index', type=int, default=0)
        p.add_argument('--zero', action='store_true', help='use the zero surgery')

        p = knot_command('quotients', 'epimorphisms onto catalog groups')
        p.add_argument('--groups', type=_group_list, default=list(DEFAULT_CATALOG))
        p.add_argument('--zero', action='store_true', help='use the zero surgery')
        p.add_argument('--budget', type=int)

        p = knot_command('fibered', 'search for a non-fiberedness certificate')
        p.add_argument('--groups', type=_group_list)
        p.add_argument('--budget', type=int)

        p = sub.add_parser('surgery-sw', parents=[common], help='SW series of knot surgery X_K')
        p.add_argument('--sw-x', dest='sw_x', default='1', help="series file, or '1'")
        p.add_argument('--knot', required=True)
        p.add_argument('--trunc', type=int)

        p = sub.add_parser('bundle-pi1', parents=[common], help='torus bundle presentation and H1')
        bundle_flags(p)

        p = sub.add_parser('cover-index', parents=[common], help='index of <s1^l, s2^l, t_i> by coset enumeration')
        bundle_flags(p)
        p.add_argument('--l', dest='l', type=int, required=True)
        p.add_argument('--max-cosets', dest='max_cosets', type=int)

        p = knot_command('verdict', 'symplectic verdict for knot surgery on a torus bundle')
        bundle_flags(p)
        p.add_argument('--assert-fibered', dest='assert_fibered', action='store_true')
        p.add_argument('--heuristic-fibered', dest='heuristic_fibered', action='store_true')
        p.add_argument('--groups', type=_group_list)
        p.add_argument('--budget', type=int)

        sub.add_parser('knots', parents=[common], help='list the knot table')

        p = knot_command('crosscheck', 'compare twisted invariants with the cover')
        p.add_argument('--group', required=True)
        p.add_argument('--index', type=int, default=0)
        p.add_argument('--strict', action='store_true')

        p = knot_command('presentation', 'print the knot group presentation')
        p.add_argument('--zero', action='store_true', help='zero surgery instead of the exterior')
        return parser

    def resolve_knot(self, text) -> PDCode:
        if text.lstrip().upper().startswith('X('):
            return pd_from_text(text)
        return self.table.pd(text)

    def _epimorphism(self, p, group_name, index):
        epis = enumerate_epimorphisms(p, catalog(group_name))
        if not 0 <= index < len(epis):
            raise InvalidArgumentError(f"{len(epis)} epimorphisms onto {group_name}; index {index} is out of range")
        return epis[index]

    def alex(self, args):
        if args.seifert:
            return self.seifert(args)
        delta = alexander_polynomial(knot_group(self.resolve_knot(args.knot)))
        return AlexanderReport(knot=args.knot, delta=str(delta), monic=is_monic(delta))

    def seifert(self, args):
        delta = seifert_alexander(self.table.lookup(args.knot).seifert)
        return AlexanderReport(knot=args.knot, delta=str(delta), monic=is_monic(delta), source='seifert')

    def talex(self, args):
        knot = self.resolve_knot(args.knot)
        p = zero_surgery_presentation(knot) if args.zero else knot_group(knot)
        epi = self._epimorphism(p, args.group, args.index)
        result = twisted_alexander(p, rep_from_epimorphism(epi, abelian_phi(p)))
        return TwistedAlexanderReport(knot=args.knot, group=args.group, index=args.index,
                                      images=[str(g) for g in epi.images], polynomial=str(result.polynomial),
                                      minor_gcd=str(result.minor_gcd),
                                      deleted_generator=result.deleted_generator + 1,
                                      correction_exact=result.correction_exact, vanishes=result.vanishes)

    def quotients(self, args):
        knot = self.resolve_knot(args.knot)
        p = zero_surgery_presentation(knot) if args.zero else knot_group(knot)
        meridian = p.peripherals['meridian']
        report = QuotientsReport(knot=args.knot)
        for name in args.groups:
            epis = enumerate_epimorphisms(p, catalog(name), budget=args.budget)
            report.counts[name] = len(epis)
            for i, epi in enumerate(epis):
                r, l = cover_invariants(epi, meridian)
                report.entries.append(QuotientEntry(group=name, index=i, images=[str(g) for g in epi.images],
                                                    r=r, l=l))
        return report

    def fibered(self, args):
        return fibered_obstruction_search(self.resolve_knot(args.knot), groups=args.groups,
                                          budget=args.budget, name=args.knot)

    def surgery_sw(self, args):
        if args.sw_x == '1':
            sw_x = SWSeries.polynomial(LaurentPoly.one(), args.trunc)
        else:
            try:
                with open(args.sw_x, 'r', encoding='utf-8') as f:
                    sw_x = SWSeries.from_text(f.read())
            except OSError as e:
                raise InvalidArgumentError(f"cannot read series file {args.sw_x}: {e}") from None
        delta = alexander_polynomial(knot_group(self.resolve_knot(args.knot)))
        series = knot_surgery_sw(sw_x, delta)
        trunc = args.trunc if args.trunc is not None else series.truncation
        coefficients = {','.join(str(x) for x in e): c for e, c in series.expand(trunc).items()}
        return SeriesReport(num=str(series.numerator), den=[str(LaurentPoly.monomial(m)) for m in series.denominators],
                            trunc=trunc, coefficients=coefficients)

    def bundle_pi1(self, args):
        p = torus_bundle_presentation(load_monodromy(args), args.euler)
        b1, torsion = abelianization(p)
        return BundleReport(genus=args.genus, euler=list(args.euler), presentation=p.to_text(), b1=b1,
                            torsion=torsion)

    def cover_index(self, args):
        monodromy = load_monodromy(args)
        if len(monodromy) == 2:
            p = torus_bundle_pullback(monodromy, args.euler, args.l)
        elif all(e % args.l == 0 for e in args.euler):
            p = torus_bundle_presentation(monodromy, args.euler)
        else:
            raise InvalidArgumentError(f"genus {args.genus}: the Euler class must be divisible by l = {args.l}")
        table = todd_coxeter(p, bundle_index_subgroup(args.genus, args.l), max_cosets=args.max_cosets)
        return CoverIndexReport(genus=args.genus, l=args.l, euler=list(args.euler), index=table.index)

    def verdict(self, args):
        knot = self.resolve_knot(args.knot)
        knot_genus = None
        if args.knot in self.table.entries:
            knot_genus = self.table.lookup(args.knot).genus
        return symplectic_verdict(knot, (load_monodromy(args), args.euler), name=args.knot,
                                  assert_fibered=args.assert_fibered, heuristic_fibered=args.heuristic_fibered,
                                  knot_genus=knot_genus, groups=args.groups, budget=args.budget)

    def knots(self, args):
        return KnotListReport(knots=[self.table.lookup(name) for name in self.table.names()])

    def crosscheck(self, args):
        p = knot_group(self.resolve_knot(args.knot))
        epi = self._epimorphism(p, args.group, args.index)
        return cover_crosscheck(p, epi, strict=args.strict, index=args.index)

    def presentation(self, args):
        knot = self.resolve_knot(args.knot)
        p = zero_surgery_presentation(knot) if args.zero else knot_group(knot)
        return PresentationReport(knot=args.knot, zero_surgery=args.zero, presentation=p.to_text())

    @log_function_call
    def run(self, argv=None, out=None, err=None):
        """Parse argv, run one subcommand and write its report. Returns the exit code."""
        out = out or sys.stdout
        err = err or sys.stderr
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return e.code if isinstance(e.code, int) else 2
        log.info(f"knotforge {args.command} (threads={settings.THREADS})")
        try:
            report = self.commands[args.command](args)
        except UnknownKnotError as e:
            print(f"error: {e}", file=err)
            return 2
        except KnotforgeError as e:
            log.error(f"{args.command} failed: {e}")
            print(f"error: {e}", file=err)
            return 1
        print(report.model_dump_json(indent=2) if args.json else report.to_text(), file=out)
        return 0


def dispatch(argv=None, out=None, err=None) -> int:
    return KnotforgeCLI().run(argv, out, err)
