"""Command line interface for building and checking stepping-up colorings.

Exit codes: 0 success, 1 a claim or certificate failed, 2 inconclusive
(search exhausted, budget hit or result truncated), 3 I/O or file format
problem, 4 usage or invalid input.
"""

import json
import logging
import sys
from typing import Any, Dict, Optional

import click

from stepup_ramsey import (
    CERTIFICATE_SCHEMA_VERSION, PHI_FORMAT_VERSION, PSI_FORMAT_VERSION,
    __version__)
from stepup_ramsey.core import (
    base_coloring, cliquesearch, extrema, finders, formats, proofcheck)
from stepup_ramsey.core.delta_core import delta_sequence
from stepup_ramsey.core.errors import (
    CertificateError, ClaimViolation, CrossCheckError, FormatError,
    PipelineError, ResourceError, SearchExhausted, StepupError)
from stepup_ramsey.core.models import (
    RunConfig, SearchBudget, ViolationCertificate, default_budget)
from stepup_ramsey.core.stepup import StepColoring, make_step_coloring

EXIT_OK = 0
EXIT_CLAIM = 1
EXIT_INCONCLUSIVE = 2
EXIT_IO = 3
EXIT_USAGE = 4


def _emit_error(problem, code, payload=None):
    click.echo(f'Error: {problem}', err=True)
    if payload is not None:
        finders.ReporterFinder.find_reporter('EchoReporter')().report(payload)
    return code


def exit_code_for(problem: BaseException):
    """Map an exception raised by a command to (exit code, JSON payload)."""
    if isinstance(problem, ClaimViolation):
        return EXIT_CLAIM, problem.report
    if isinstance(problem, CrossCheckError):
        return EXIT_CLAIM, problem.details
    if isinstance(problem, PipelineError):
        return EXIT_CLAIM, problem.state
    if isinstance(problem, SearchExhausted):
        return EXIT_INCONCLUSIVE, problem.log
    if isinstance(problem, ResourceError):
        return EXIT_INCONCLUSIVE, None
    if isinstance(problem, (FormatError, OSError, click.FileError)):
        return EXIT_IO, None
    if isinstance(problem, (click.ClickException, StepupError, ValueError)):
        return EXIT_USAGE, None
    return None, None


class ExitCodeGroup(click.Group):
    """Click group that turns exceptions into the documented exit codes."""

    def main(self, args=None, prog_name=None, complete_var=None,
             standalone_mode=True, **extra):
        try:
            result = super().main(args=args, prog_name=prog_name,
                                  complete_var=complete_var,
                                  standalone_mode=False, **extra)
            code = result if isinstance(result, int) else EXIT_OK
        except click.Abort:
            click.echo('Aborted!', err=True)
            code = EXIT_CLAIM
        except Exception as problem:  # pylint: disable=broad-except
            code, payload = exit_code_for(problem)
            if code is None:
                raise
            if isinstance(problem, click.ClickException):
                problem.show()
            else:
                _emit_error(problem, code, payload)
        if standalone_mode:
            sys.exit(code)
        return code


@click.group(cls=ExitCodeGroup)
@click.version_option(
    __version__, prog_name='stepup_ramsey',
    message=(f'%(prog)s %(version)s (PHI1 format v{PHI_FORMAT_VERSION}, '
             f'PSI1 format v{PSI_FORMAT_VERSION}, certificate schema '
             f'v{CERTIFICATE_SCHEMA_VERSION})'))
@click.option('--verbose', '-v', count=True,
              help='Repeat for more logging (-v info, -vv debug).')
def main(verbose):
    """Build, search and machine-check stepping-up Ramsey colorings."""
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, force=True)


def budget_options(func):
    """Add the shared search budget options to a command."""
    func = click.option('--workers', type=click.IntRange(min=1), default=1,
                        help='Number of worker processes.')(func)
    func = click.option('--max-seconds', type=float, default=None,
                        help='Wall-clock limit for searches.')(func)
    func = click.option('--max-subsets', type=click.IntRange(min=1),
                        default=None, help=(
                            'Enumeration budget (default from '
                            'STEPUP_RAMSEY_BUDGET or 10**8).'))(func)
    return func


def output_option(func):
    return click.option('--output', type=click.Path(dir_okay=False),
                        default=None,
                        help='Write the JSON result here, not stdout.')(func)


def make_budget(max_subsets, max_seconds, workers) -> SearchBudget:
    return SearchBudget(
        max_subsets=max_subsets if max_subsets is not None
        else default_budget(),
        max_seconds=max_seconds, workers=workers)


def echo_config(subcommand: str, budget: Optional[SearchBudget] = None,
                inputs: Optional[Dict[str, Any]] = None,
                output: Optional[str] = None, **params) -> RunConfig:
    """Validate the run configuration and print it as one stderr line."""
    config = RunConfig(
        subcommand=subcommand, budget=budget or SearchBudget(),
        inputs={key: str(value) for key, value in (inputs or {}).items()
                if value is not None},
        output=output, **params)
    click.echo('config: ' + json.dumps(
        config.model_dump(mode='json'), sort_keys=True), err=True)
    return config


def report(result, output: Optional[str]) -> None:
    if output:
        reporter = finders.ReporterFinder.find_reporter('FileReporter')(
            path=output)
    else:
        reporter = finders.ReporterFinder.find_reporter('EchoReporter')()
    reporter.report(result)


def load_base(phi_path: Optional[str], psi_path: Optional[str]):
    if bool(phi_path) == bool(psi_path):
        raise click.UsageError('Give exactly one of --phi or --psi.')
    if phi_path:
        return formats.read_phi(phi_path)
    return formats.read_psi(psi_path)


def load_vertices(path: Optional[str], bits: int):
    if path is None:
        return list(range(1 << bits))
    with open(path, encoding='utf8') as fdesc:
        data = json.load(fdesc)
    if not isinstance(data, list) or not all(
            isinstance(item, int) for item in data):
        raise FormatError(f'{path} must hold a JSON list of integers')
    return sorted(data)


def base_options(func):
    func = click.option('--psi', type=click.Path(exists=True, dir_okay=False),
                        default=None,
                        help='PSI1 file with a 4-subset base coloring.')(func)
    func = click.option('--phi', type=click.Path(exists=True, dir_okay=False),
                        default=None,
                        help='PHI1 file with a pair base coloring.')(func)
    return func


@main.command(name='gen-phi')
@click.option('--n', 'n', type=click.IntRange(min=1), required=True)
@click.option('--m', 'm', type=click.IntRange(min=2), required=True,
              help='Ground set size M of the pair coloring.')
@click.option('--seed', type=click.IntRange(min=0, max=2**63 - 1),
              default=None, help='Seed; a fresh one is drawn and printed '
              'when omitted.')
@click.option('--attempts', type=click.IntRange(min=0), default=10**5,
              help='Maximum colorings to sample. The default is an '
              'engineering choice, not derived from n.')
@click.option('--phi', 'phi_path', type=click.Path(dir_okay=False),
              required=True, help='Where to write the PHI1 file.')
@budget_options
@output_option
def gen_phi(n, m, seed, attempts, phi_path, max_subsets, max_seconds,
            workers, output):
    """Sample a pair coloring with both avoidance properties."""
    seed = base_coloring.fresh_seed() if seed is None else seed
    budget = make_budget(max_subsets, max_seconds, workers)
    echo_config('gen-phi', budget, {'phi': phi_path}, output, n=n, m=m,
                seed=seed)
    phi, log = base_coloring.generate_phi(
        n, m, seed=seed, max_attempts=attempts, budget=budget.max_subsets,
        workers=workers)
    formats.write_phi(phi_path, phi)
    click.echo(f'accepted after {log.attempts} attempts', err=True)
    report(log, output)
    return EXIT_OK


@main.command(name='check-phi')
@click.option('--phi', 'phi_path', type=click.Path(exists=True,
                                                    dir_okay=False),
              required=True)
@click.option('--n', 'n', type=click.IntRange(min=1), required=True)
@budget_options
@output_option
def check_phi(phi_path, n, max_subsets, max_seconds, workers, output):
    """Re-verify both avoidance properties of a stored pair coloring."""
    budget = make_budget(max_subsets, max_seconds, workers)
    phi = formats.read_phi(phi_path)
    echo_config('check-phi', budget, {'phi': phi_path}, output, n=n,
                m=phi.ground_size, seed=phi.seed)
    free_set = base_coloring.find_bad4_free_nset(
        phi, n, budget.max_subsets, workers)
    abc = base_coloring.find_abc_structure(phi, n, budget.max_subsets,
                                           workers)
    result = {'n': n, 'm': phi.ground_size, 'bad4_free_nset': free_set,
              'abc_structure': abc,
              'passed': free_set is None and abc is None}
    report(result, output)
    return EXIT_OK if result['passed'] else EXIT_CLAIM


def _case_table(summary) -> str:
    lines = [f'{"case":>5} {"patterns":>9} {"assignments":>12} {"max":>4}']
    for label, stat in sorted(summary.per_case.items()):
        lines.append(f'{label:>5} {stat.patterns:>9} {stat.assignments:>12} '
                     f'{stat.max_red:>4}')
    lines.append(f'global max {summary.global_max} (limit {summary.limit})')
    return '\n'.join(lines)


@main.command(name='proofcheck')
@click.option('--variant', is_flag=True,
              help='Check the 4-subset based rules (at most 4 red).')
@click.option('--hypothesis-filter/--no-hypothesis-filter', default=True,
              help='Variant only: require at most 3 red 4-subsets among '
              'any 5 ranks. Without it violations are expected.')
@click.option('--workers', type=click.IntRange(min=1), default=1)
@output_option
def proofcheck_cmd(variant, hypothesis_filter, workers, output):
    """Exhaustively check the red-count claim over all delta patterns."""
    echo_config('proofcheck', SearchBudget(workers=workers), {}, output)
    if variant:
        summary = proofcheck.check_six_point_claim_variant(
            hypothesis_filter, workers, raise_on_violation=False)
    else:
        summary = proofcheck.check_six_point_claim(
            workers, raise_on_violation=False)
    click.echo(_case_table(summary), err=True)
    report(summary, output)
    return EXIT_OK if summary.holds else EXIT_CLAIM


@main.command(name='verify')
@base_options
@click.option('--bits', type=click.IntRange(min=1), required=True,
              help='Bit width N of the vertex set.')
@click.option('--vertices', 'vertices_path',
              type=click.Path(exists=True, dir_okay=False), default=None,
              help='JSON list of vertices (default: all 2**bits).')
@click.option('--cross-check', is_flag=True,
              help='Compare each new delta pattern with the symbolic path.')
@budget_options
@output_option
def verify(phi, psi, bits, vertices_path, cross_check, max_subsets,
           max_seconds, workers, output):
    """Maximum number of red 5-subsets among any 6 vertices."""
    budget = make_budget(max_subsets, max_seconds, workers)
    base = load_base(phi, psi)
    echo_config('verify', budget, {'phi': phi, 'psi': psi,
                                   'vertices': vertices_path}, output,
                m=base.ground_size, bit_width=bits, seed=base.seed)
    sc = make_step_coloring(base, bits)
    vertices = load_vertices(vertices_path, bits)
    validator = proofcheck.SymbolicCrossValidator(sc) if cross_check else None
    if sc.rule_set.base_arity == 2:
        result = cliquesearch.max_red_in_six(sc, vertices, budget, validator)
    else:
        result = cliquesearch.max_red_in_six_variant(sc, vertices, budget,
                                                     validator)
    report(result, output)
    if result.exceeds_threshold:
        return EXIT_CLAIM
    return EXIT_OK if result.exact else EXIT_INCONCLUSIVE


@main.command(name='clique')
@base_options
@click.option('--bits', type=click.IntRange(min=1), required=True)
@click.option('--vertices', 'vertices_path',
              type=click.Path(exists=True, dir_okay=False), default=None)
@budget_options
@output_option
def clique(phi, psi, bits, vertices_path, max_subsets, max_seconds,
           workers, output):
    """Search for a largest blue clique (all 5-subsets blue)."""
    budget = make_budget(max_subsets, max_seconds, workers)
    base = load_base(phi, psi)
    echo_config('clique', budget, {'phi': phi, 'psi': psi,
                                   'vertices': vertices_path}, output,
                m=base.ground_size, bit_width=bits, seed=base.seed)
    sc = make_step_coloring(base, bits)
    result = cliquesearch.max_blue_clique(
        sc, load_vertices(vertices_path, bits), budget)
    report(result, output)
    return EXIT_OK if result.exact else EXIT_INCONCLUSIVE


def _replay(cert_path, phi_path, vertices_path, output):
    with open(cert_path, encoding='utf8') as fdesc:
        try:
            cert = ViolationCertificate.model_validate(json.load(fdesc))
        except ValueError as problem:
            raise FormatError(f'Bad certificate {cert_path}: {problem}'
                              ) from problem
    phi = formats.read_phi(phi_path)
    echo_config('witness', SearchBudget(), {'replay': cert_path,
                                            'phi': phi_path,
                                            'vertices': vertices_path},
                output, n=cert.n, m=phi.ground_size,
                bit_width=cert.bit_width, seed=phi.seed)
    sc = StepColoring(phi, cert.bit_width, cert.rule_set)
    clique_vertices = (load_vertices(vertices_path, cert.bit_width)
                       if vertices_path else cert.clique)
    try:
        accepted = extrema.verify_certificate(cert, phi, sc,
                                              clique_vertices)
    except CertificateError as problem:
        logging.warning('Certificate rejected: %s', problem)
        accepted = False
    report({'kind': cert.kind, 'accepted': accepted}, output)
    return EXIT_OK if accepted else EXIT_CLAIM


@main.command(name='witness')
@click.option('--phi', 'phi_path', type=click.Path(exists=True,
                                                    dir_okay=False),
              required=True)
@click.option('--replay', 'cert_path',
              type=click.Path(exists=True, dir_okay=False), default=None,
              help='Replay a certificate instead of building one.')
@click.option('--bits', type=click.IntRange(min=1), default=None)
@click.option('--n', 'n', type=click.IntRange(min=1), default=None)
@click.option('--vertices', 'vertices_path',
              type=click.Path(exists=True, dir_okay=False), default=None,
              help='JSON list holding the purported blue clique '
              '(default: all 2**bits vertices). With --replay the '
              'certificate is checked against this list instead of '
              'the clique stored in it.')
@output_option
def witness(phi_path, cert_path, bits, n, vertices_path, output):
    """Refute a purported blue clique, or replay such a refutation."""
    if cert_path:
        return _replay(cert_path, phi_path, vertices_path, output)
    if bits is None or n is None:
        raise click.UsageError('--bits and --n are needed to build a '
                               'certificate.')
    phi = formats.read_phi(phi_path)
    echo_config('witness', SearchBudget(), {'phi': phi_path,
                                            'vertices': vertices_path},
                output, n=n, m=phi.ground_size, bit_width=bits,
                seed=phi.seed)
    sc = StepColoring(phi, bits, 'Main64')
    vertices = load_vertices(vertices_path, bits)
    cert = extrema.build_abc_witness(vertices, sc, n)
    accepted = extrema.verify_certificate(cert, phi, sc, vertices)
    click.echo(f'{cert.kind} certificate, replay '
               f'{"accepted" if accepted else "rejected"}', err=True)
    report(cert, output)
    return EXIT_OK if accepted else EXIT_CLAIM


@main.command(name='steiner')
@click.option('--n', 'n', type=click.IntRange(min=4), required=True)
@output_option
def steiner(n, output):
    """Greedy partial Steiner (n, 4, 2) system."""
    echo_config('steiner', None, {}, output, n=n)
    system = base_coloring.greedy_partial_steiner(n)
    report({'n': n, 'block_count': system.block_count,
            'blocks': system.blocks}, output)
    return EXIT_OK


@main.command(name='bounds')
@click.option('--n', 'n', type=click.IntRange(min=1), required=True)
@click.option('--m', 'm', type=click.IntRange(min=2), required=True)
@click.option('--exact', is_flag=True,
              help='Also print exact rational values.')
@output_option
def bounds(n, m, exact, output):
    """Expected A/B/C structures and the good n-set bound."""
    echo_config('bounds', None, {}, output, n=n, m=m)
    result = base_coloring.expected_counts(n, m).model_dump()
    if exact:
        abc, good = base_coloring.expected_counts_exact(n, m)
        result['abc_expectation_exact'] = str(abc)
        result['good_set_bound_exact'] = str(good)
        result['bad_4tuple_probability'] = str(
            base_coloring.BAD_4TUPLE_PROBABILITY)
    report(result, output)
    return EXIT_OK


@main.command(name='chi-eval')
@base_options
@click.option('--bits', type=click.IntRange(min=1), required=True)
@click.argument('vertices', nargs=5, type=int)
@output_option
def chi_eval(phi, psi, bits, vertices, output):
    """Color of five increasing vertices with the rule that decides it."""
    base = load_base(phi, psi)
    echo_config('chi-eval', None, {'phi': phi, 'psi': psi}, output,
                m=base.ground_size, bit_width=bits, seed=base.seed)
    sc = make_step_coloring(base, bits)
    sequence = delta_sequence(list(vertices))
    result = {'vertices': list(vertices), 'deltas': list(sequence.raw),
              'pattern': list(sequence.pattern),
              'rule': sc.rule_set.classify(sequence.raw).value,
              'color': sc.color(list(vertices)).value,
              'rule_set': sc.rule_set.name}
    report(result, output)
    return EXIT_OK


if __name__ == '__main__':
    main()  # pylint: disable=no-value-for-parameter
