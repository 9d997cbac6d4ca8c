import logging
import random
import sys
from argparse import ArgumentParser
from os.path import realpath, dirname

from torclosed import higher
from torclosed.certify.theorems import EXPECTATIONS, certify_all, expectation
from torclosed.chaincase import PalloWord, build_chain_tamari, check_phi, is_torclosed_word
from torclosed.config import Settings
from torclosed.congruence import random_doubling_script, replay
from torclosed.data import PosetDocument, dump_script, load_script
from torclosed.errors import NotationUnresolved, TorclosedError
from torclosed.exporters.dot_exporter import DotExporter
from torclosed.exporters.json_exporter import JsonExporter
from torclosed.lattice import Lattice
from torclosed.parsing import parse_int_list, parse_name_list, parse_os_tuple, parse_word
from torclosed.ptamari import PhiChain, build_components, build_lattice, count_torclosed, is_torclosed, omega_labelling

pwd = dirname(realpath(__file__))
log = logging.getLogger(__name__)


class Failed(Exception):
    pass


def settings_from(args) -> Settings:
    return Settings.from_env().override(seed=args.seed, budget=args.budget)


def export(args, lattice: Lattice, labelling=None, ptl=None):
    if args.export == 'dot':
        DotExporter(lattice, labelling).write(args.o)
    else:
        JsonExporter(lattice, labelling, ptl=ptl).write(args.o)


def check_assertions(args, lattice: Lattice, settings: Settings):
    results = [expectation(lattice, name, settings) for name in args.assert_]
    report(results)


def report(results):
    for result in results:
        print(result.line())
    if not all(r.passed for r in results):
        raise Failed()


def agreement(name, enumerated, formula):
    verdict = 'AGREE' if enumerated == formula else 'DISAGREE'
    print(f"{name}: enumerated {enumerated}, formula {formula}, {verdict}")
    return enumerated == formula


def tamari(args):
    settings = settings_from(args)
    doc = PosetDocument.load(args.input)
    if args.chain:
        raw = doc.to_dict()
        raw['chain'] = parse_name_list(args.chain)
        doc = PosetDocument.from_dict(raw)
    P, phi = doc.poset(), doc.phi()
    if args.chain_case:
        order = P.linear_extension()
        if not P.is_chain(order):
            raise TorclosedError('--chain-case needs a totally ordered poset')
        position = {x: i for i, x in enumerate(order)}
        built = build_chain_tamari(P.n, [position[x] for x in phi])
        export(args, built.lattice)
        check_assertions(args, built.lattice, settings)
        return
    cm = build_components(PhiChain(P, tuple(phi)))
    if args.count_only:
        print(count_torclosed(cm, settings.budget))
        return
    ptl = build_lattice(cm, verify_limit=settings.verify_limit, budget=settings.budget)
    export(args, ptl.lattice, omega_labelling(ptl), ptl)
    check_assertions(args, ptl.lattice, settings)


def auslander(args):
    settings = settings_from(args)
    n, d = args.n, args.d
    if n < 1 or d < 1:
        raise TorclosedError('-n and -d must be positive')
    if args.tuple:
        cm = higher.auslander_components(n, d)
        S = higher.auslander_subset(cm, d, [parse_os_tuple(t) for t in args.tuple])
        verdict = is_torclosed(cm, S)
        print(f"{cm.name(S)}: " + ('torclosed' if verdict else f'not torclosed, {verdict.witness}'))
        if not verdict:
            raise Failed()
        return
    if args.count_only:
        print(count_torclosed(higher.auslander_components(n, d), settings.budget))
        return
    ptl = higher.auslander_lattice(n, d, verify_limit=settings.verify_limit, budget=settings.budget)
    if args.formula:
        counts = higher.auslander_counts(n, d, ptl)
        agree = [
            agreement('jirr', counts.jirr, counts.jirr_formula),
            agreement('mirr', counts.mirr, counts.mirr_formula),
            agreement('spine', counts.spine, counts.spine_formula),
            agreement('sd', counts.sd, counts.sd_formula),
        ]
        if n == 3:
            agree.append(agreement('size', len(ptl), higher.l3d_formula(d)))
        elif n == 4:
            try:
                agree.append(agreement('size', len(ptl), higher.l4d_formula(d, strict=args.strict)))
            except NotationUnresolved as e:
                print(f"size: enumerated {len(ptl)}, formula unresolved ({e})")
        if not all(agree):
            raise Failed()
        return
    export(args, ptl.lattice, omega_labelling(ptl), ptl)
    check_assertions(args, ptl.lattice, settings)


def growth(args):
    settings = settings_from(args)
    if args.n < 1 or args.max_d < 1:
        raise TorclosedError('-n and --max-d must be positive')
    for row in higher.growth_data(args.n, args.max_d, settings.budget):
        print(row.line())


def nakayama(args):
    settings = settings_from(args)
    kupisch = parse_int_list(args.kupisch)
    built = higher.nakayama_lattice(kupisch, args.d)
    export(args, built.quotient)
    check_assertions(args, built.quotient, settings)


def chain(args):
    settings = settings_from(args)
    phi = parse_int_list(args.phi)
    if args.word:
        check_phi(args.N, phi)
        found = [PalloWord(parse_word(text), tuple(phi)) for text in args.word]
        for w in found:
            print(f"{w}: " + ('torclosed' if is_torclosed_word(w) else 'not torclosed'))
        if not all(is_torclosed_word(w) for w in found):
            raise Failed()
        return
    built = build_chain_tamari(args.N, phi)
    if args.count_only:
        print(len(built.words))
        return
    export(args, built.lattice)
    check_assertions(args, built.lattice, settings)


def certify(args):
    settings = settings_from(args)
    for name in args.expect:
        if name not in EXPECTATIONS:
            raise TorclosedError(f'unknown property "{name}", expected one of {", ".join(EXPECTATIONS)}')
    script = load_script(args.script) if args.script else None
    if args.input:
        doc = PosetDocument.load(args.input)
        if doc.chain:
            ptl = build_lattice(build_components(PhiChain(doc.poset(), tuple(doc.phi()))),
                                verify_limit=settings.verify_limit, budget=settings.budget)
            lattice = ptl.lattice
        else:
            ptl, lattice = None, Lattice(doc.poset())
    elif script is not None:
        ptl, lattice = None, replay(script)
    else:
        raise TorclosedError('certify needs an input document or --script')
    results = certify_all(lattice, ptl=ptl, script=script, expect=args.expect, settings=settings)
    report(results)


def random_script(args):
    settings = settings_from(args)
    script = random_doubling_script(random.Random(settings.seed), args.steps, args.max_size)
    dump_script(script, args.o)
    print(f"Script with {len(script)} steps written to {args.o}", file=sys.stderr)


def main():
    common_arguments = (
        (('-v', '--verbose'), dict(
            action='store_true',
            help='log progress to stderr')),

        (('--seed',), dict(
            type=int,
            help='seed for randomised checks (default: $TORCLOSED_SEED or 20240601)')),

        (('--budget',), dict(
            type=float,
            help='time budget in seconds for enumerations and searches (default: $TORCLOSED_BUDGET or 120)')),
    )
    output_arguments = (
        (('--export',), dict(
            choices=('json', 'dot'),
            default='json',
            help='output format (default: json summary)')),

        (('-o',), dict(
            help='output file. defaults to stdout',
            metavar='FILE')),

        (('--assert',), dict(
            dest='assert_',
            action='append',
            default=[],
            choices=EXPECTATIONS,
            help='fail with exit code 2 unless the lattice has this property')),
    )
    parser = ArgumentParser(prog='torclosed')
    parser.add_argument('--version', '-V', help='show program version', action='store_true')
    subparsers = parser.add_subparsers(dest='command')

    tamari_parser = subparsers.add_parser('tamari', help='build Tam(P, phi) from a poset document')
    tamari_parser.add_argument('input', help='JSON poset document')
    tamari_parser.add_argument('--chain', help='comma-separated element names of phi, overrides the document')
    tamari_parser.add_argument('--chain-case', action='store_true',
                               help='P is a chain, phi(0) need not be its minimum')
    tamari_parser.add_argument('--count-only', action='store_true', help='only count torclosed sets')

    auslander_parser = subparsers.add_parser('auslander', help='build L_n^d = Tam(os_n^d, diagonal)')
    auslander_parser.add_argument('-n', type=int, required=True)
    auslander_parser.add_argument('-d', type=int, required=True)
    auslander_parser.add_argument('--formula', action='store_true', help='compare with closed forms')
    auslander_parser.add_argument('--strict', action='store_true',
                                  help='report empty intervals in the n = 4 formula as unresolved')
    auslander_parser.add_argument('--count-only', action='store_true', help='only count torclosed sets')
    auslander_parser.add_argument('--tuple', action='append', default=[],
                                  help='ground tuple such as 013, repeat to test whether the set is torclosed')

    growth_parser = subparsers.add_parser('growth', help='tabulate |L_n^d| against |J(os_n^(d+1))|')
    growth_parser.add_argument('-n', type=int, required=True)
    growth_parser.add_argument('--max-d', type=int, default=4)

    nakayama_parser = subparsers.add_parser('nakayama', help='build the Nakayama quotient of L_n^d')
    nakayama_parser.add_argument('--kupisch', required=True, help='Kupisch series, e.g. 1,2,2')
    nakayama_parser.add_argument('-d', type=int, required=True)

    chain_parser = subparsers.add_parser('chain', help='build Tam(C_N, phi) on words')
    chain_parser.add_argument('-N', type=int, required=True)
    chain_parser.add_argument('--phi', required=True, help='chain values, e.g. 0,1,2')
    chain_parser.add_argument('--count-only', action='store_true', help='only count torclosed words')
    chain_parser.add_argument('--word', action='append', default=[],
                              help='word such as 0102 to test, may be repeated')

    certify_parser = subparsers.add_parser('certify', help='run the theorem checks')
    certify_parser.add_argument('input', nargs='?', help='JSON poset document (with a chain: Tam(P, phi))')
    certify_parser.add_argument('--script', help='JSON doubling script to check')
    certify_parser.add_argument('--expect', action='append', default=[], help='property the lattice must have')

    script_parser = subparsers.add_parser('random-script', help='write a random doubling script')
    script_parser.add_argument('--steps', type=int, default=5)
    script_parser.add_argument('--max-size', type=int, default=40)
    script_parser.add_argument('-o', required=True, metavar='FILE')

    for p in (tamari_parser, auslander_parser, nakayama_parser, chain_parser):
        for args, kwargs in output_arguments:
            p.add_argument(*args, **kwargs)
    for p in (tamari_parser, auslander_parser, nakayama_parser, chain_parser, certify_parser, script_parser,
              growth_parser):
        for args, kwargs in common_arguments:
            p.add_argument(*args, **kwargs)

    args = parser.parse_args()

    if args.version:
        with open(f"{pwd}/VERSION") as f:
            print(f"torclosed: {f.read()}")
            exit(0)

    commands = {
        'tamari': tamari,
        'auslander': auslander,
        'growth': growth,
        'nakayama': nakayama,
        'chain': chain,
        'certify': certify,
        'random-script': random_script,
    }
    if args.command not in commands:
        parser.print_usage()
        exit(1)

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        commands[args.command](args)
    except Failed:
        exit(2)
    except TorclosedError as e:
        print(f"Error: {e}", file=sys.stderr)
        exit(1)


if __name__ == "__main__":
    main()
