"""Controller implementing the command line commands"""

import argparse
import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from ..exceptions import GaussMapError, NotGeneral, ParseError, UsageError
from ..models.chords import ChordDiagram
from ..models.schemas import parse_diagram, parse_polygon, parse_star
from ..models.spherical import SphericalPolygon, as_unit
from ..models.star import VertexStar
from ..services.chord_service import NORTH
from ..services.verification_service import SUITES
from .app_controller import AppController


COMMANDS = ('analyze-star', 'gauss-image', 'classify', 'index', 'degree',
            'normal-form', 'realize', 'analyze-mesh', 'verify')


class CommandParser(argparse.ArgumentParser):
    """Argument parser that reports usage problems as UsageError"""

    def error(self, message: str):
        raise UsageError(message)


def parse_xi(text: str) -> np.ndarray:
    """Parses a direction given as "x,y,z" """
    try:
        values = [float(part) for part in text.split(',')]
    except ValueError as e:
        raise UsageError(f"--xi expects three comma separated numbers, got '{text}'") from e
    if len(values) != 3:
        raise UsageError(f"--xi expects three comma separated numbers, got '{text}'")
    return np.array(values)


def round_floats(value: Any, digits: int = 17) -> Any:
    """Recursively converts numpy values and rounds floats to significant digits"""
    if isinstance(value, dict):
        return {str(k): round_floats(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(v, digits) for v in value]
    if isinstance(value, np.ndarray):
        return round_floats(value.tolist(), digits)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(format(float(value), f'.{digits}g'))
    return value


def build_parser() -> CommandParser:
    parser = CommandParser(
        prog='gaussmap',
        description='Discrete Gauss map analysis of polyhedral vertex stars, spherical polygons and meshes'
    )
    parser.add_argument('--config', help='Path to a config.json overriding the defaults')
    parser.add_argument('--log-level', help='Logging level (DEBUG, INFO, WARNING, ERROR)')

    common = CommandParser(add_help=False)
    common.add_argument('--seed', type=int, default=None, help='Seed for every random choice')
    common.add_argument('--output', choices=('json', 'pretty'), default=None, help='Output format')
    common.add_argument('--xi', type=parse_xi, default=None, help='Height direction as "x,y,z"')
    common.add_argument('--samples', type=int, nargs='?', const=0, default=None,
                        help='Monte Carlo sample count; without a value uses sampling.monte_carlo_samples')
    common.add_argument('--jobs', type=int, default=None, help='Worker threads for sampling and meshes')

    sub = parser.add_subparsers(dest='command', parser_class=CommandParser)
    sub.required = True

    p = sub.add_parser('analyze-star', parents=[common], help='Curvature, shape and index of a vertex star')
    p.add_argument('file', help='Vertex star JSON file')

    p = sub.add_parser('gauss-image', parents=[common], help='Gauss image of a vertex star')
    p.add_argument('file', help='Vertex star JSON file')
    p.add_argument('--dump-arrangement', action='store_true', help='Include the arrangement of the Gauss image')

    p = sub.add_parser('classify', parents=[common], help='Shape of a simple Gauss image')
    p.add_argument('file', help='Vertex star JSON file')

    p = sub.add_parser('index', parents=[common], help='Critical point index of a star or polygon')
    p.add_argument('file', help='Vertex star or spherical polygon JSON file')

    p = sub.add_parser('degree', parents=[common], help='Normal degree with its winding identities')
    p.add_argument('file', help='Vertex star or spherical polygon JSON file')
    p.add_argument('--gamma', type=float, default=0.0, help='Longitude of the half meridian in radians')

    p = sub.add_parser('normal-form', parents=[common], help='Equator chord diagram of a polygon')
    p.add_argument('file', help='Vertex star or spherical polygon JSON file')

    p = sub.add_parser('realize', parents=[common], help='Polygon realizing a chord diagram or an (i, d) pair')
    p.add_argument('--diagram', help='Chord diagram JSON file')
    p.add_argument('--index', type=int, help='Index of the polygon to build')
    p.add_argument('--degree', type=int, help='Normal degree of the polygon to build')

    p = sub.add_parser('analyze-mesh', parents=[common], help='Per-vertex analysis of a closed OFF mesh')
    p.add_argument('file', help='OFF triangle mesh')
    p.add_argument('--three-critical', action='store_true', help='Check the three critical point degrees')

    p = sub.add_parser('verify', parents=[common], help='Run seeded identity suites')
    p.add_argument('--suite', default='all', choices=('all',) + SUITES, help='Suite to run')
    p.add_argument('--n', type=int, default=100, help='Cases per suite')

    return parser


class CommandController:
    """Runs one parsed command and produces its report"""

    def __init__(self, app_controller: AppController):
        self.app = app_controller
        self.settings = app_controller.settings
        self.logger = logging.getLogger('GaussMap.CommandController')
        self._handlers: Dict[str, Callable[[argparse.Namespace], Tuple[dict, bool]]] = {
            'analyze-star': self.analyze_star,
            'gauss-image': self.gauss_image,
            'classify': self.classify,
            'index': self.index,
            'degree': self.degree,
            'normal-form': self.normal_form,
            'realize': self.realize,
            'analyze-mesh': self.analyze_mesh,
            'verify': self.verify
        }

    # Input

    def _read_json(self, path: str) -> Union[dict, list]:
        file = Path(path)
        if not file.exists():
            raise ParseError(f"file not found: {path}")
        try:
            with open(file, 'r', encoding='utf-8') as f:
                return json.load(f)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e

    def load_star(self, path: str) -> VertexStar:
        data = self._read_json(path)
        if not isinstance(data, dict):
            raise ParseError(f"{path}: a vertex star must be a JSON object")
        return self.app.star_service.build_star(parse_star(data))

    def load_polygon_or_star(self, path: str) -> Tuple[SphericalPolygon, Optional[VertexStar]]:
        """A polygon file as is, or the projected ring of a star file"""
        data = self._read_json(path)
        if isinstance(data, dict) and 'center' in data:
            star = self.app.star_service.build_star(parse_star(data))
            return self.app.star_service.project_to_sphere(star), star
        polygon = parse_polygon(data)
        return self.app.spherical_service.polygon(polygon['vertices']), None

    def load_diagram(self, path: str) -> ChordDiagram:
        data = self._read_json(path)
        if not isinstance(data, dict):
            raise ParseError(f"{path}: a chord diagram must be a JSON object")
        return ChordDiagram.from_dict(parse_diagram(data))

    # Common options

    def _seed(self, args: argparse.Namespace) -> int:
        return self.settings.default_seed if args.seed is None else args.seed

    def _jobs(self, args: argparse.Namespace) -> int:
        return max(1, self.settings.jobs if args.jobs is None else args.jobs)

    def _star_direction(self, args: argparse.Namespace, star: VertexStar) -> np.ndarray:
        """--xi when given, otherwise the first seeded random direction general for the star"""
        indices = self.app.index_service
        if args.xi is not None:
            return as_unit(args.xi, self.app.spherical_service.eps)
        rng = np.random.default_rng(self._seed(args))
        for _ in range(self.settings.max_direction_retries):
            xi = self.app.spherical_service.random_unit_vectors(1, rng)[0]
            if indices.is_general(xi, star):
                return xi
        raise NotGeneral("no general direction found for the star")

    def _polygon_direction(self, args: argparse.Namespace) -> np.ndarray:
        return as_unit(NORTH if args.xi is None else args.xi, self.app.spherical_service.eps)

    def _monte_carlo(self, args: argparse.Namespace, star: VertexStar) -> Optional[dict]:
        if args.samples is None:
            return None
        n_samples = args.samples or self.settings.monte_carlo_samples
        estimate = self.app.index_service.curvature_by_index_integration(
            star, n_samples, self._seed(args), self._jobs(args))
        return estimate.to_dict()

    # Commands

    def analyze_star(self, args: argparse.Namespace) -> Tuple[dict, bool]:
        star = self.load_star(args.file)
        stars = self.app.star_service
        report = stars.curvature_parts(star).to_dict()
        inflecting, weighted = stars.inflection_faces(star)
        report.update({
            'valence': star.valence,
            'reflex_faces': [f for f, flag in enumerate(stars.reflex_flags(star)) if flag],
            'inflection_faces': sorted(inflecting),
            'inflection_count': weighted
        })

        try:
            shape = self.app.arrangement_service.classify_shape(star)
            report.update({'shape': shape.kind, 'shape_corners': shape.corners})
            if shape.variant is not None:
                report['shape_variant'] = shape.variant
        except GaussMapError as e:
            report.update({'shape': 'Unclassified', 'shape_reason': e.code})

        _, profile = self.app.arrangement_service.profile_for_star(star)
        report.update({
            'algebraic_area': profile.algebraic_area,
            'c_plus': profile.c_plus,
            'c_minus': profile.c_minus,
            'positive_area': profile.positive_area,
            'negative_area': profile.negative_area
        })

        xi = self._star_direction(args, star)
        report.update({
            'xi': xi,
            'index': self.app.index_service.index(star, xi),
            'degree': self.app.degree_service.star_degree(star, xi)
        })
        estimate = self._monte_carlo(args, star)
        if estimate is not None:
            report['monte_carlo'] = estimate
        return report, True

    def gauss_image(self, args: argparse.Namespace) -> Tuple[dict, bool]:
        star = self.load_star(args.file)
        g = self.app.star_service.gauss_image(star)
        report = {
            'vertices': g.to_list(),
            'reflex_flags': self.app.star_service.reflex_flags(star),
            'self_crossings': self.app.spherical_service.crossing_count(g),
            'angles': self.app.star_service.gauss_image_angles(star)
        }
        if args.dump_arrangement:
            arr, profile = self.app.arrangement_service.profile_for_star(star)
            report['arrangement'] = self.app.arrangement_service.arrangement_to_dict(arr, profile)
            report['layers'] = profile.to_dict()
        return report, True

    def classify(self, args: argparse.Namespace) -> Tuple[dict, bool]:
        star = self.load_star(args.file)
        shape = self.app.arrangement_service.classify_shape(star)
        return {'K': self.app.star_service.angle_deficit(star), **shape.to_dict()}, True

    def index(self, args: argparse.Namespace) -> Tuple[dict, bool]:
        polygon, star = self.load_polygon_or_star(args.file)
        if star is None:
            xi = self._polygon_direction(args)
            return {'xi': xi, 'index': self.app.index_service.polygon_index(polygon, xi)}, True

        xi = self._star_direction(args, star)
        direction = self.app.index_service.is_general(xi, star)
        if not direction:
            raise NotGeneral("direction is not general for the star", direction.to_dict())
        report = {'xi': xi, 'generality_margin': direction.generality_margin,
                  **self.app.index_service.middle_vertex_index(star, xi).to_dict()}
        estimate = self._monte_carlo(args, star)
        if estimate is not None:
            report['monte_carlo'] = estimate
        return report, True

    def degree(self, args: argparse.Namespace) -> Tuple[dict, bool]:
        polygon, star = self.load_polygon_or_star(args.file)
        xi = self._polygon_direction(args) if star is None else self._star_direction(args, star)
        report = self.app.degree_service.degree_identities(polygon, xi, args.gamma)
        return {'xi': xi, **report.to_dict()}, True

    def normal_form(self, args: argparse.Namespace) -> Tuple[dict, bool]:
        polygon, _ = self.load_polygon_or_star(args.file)
        xi = self._polygon_direction(args)
        chords = self.app.chord_service
        diagram = chords.extract_diagram(polygon, xi)
        report = {'xi': xi, 'diagram': diagram.to_dict()}
        if diagram.is_empty:
            report.update({'index': 1, 'degree': self.app.degree_service.normal_degree(polygon, xi)})
            return report, True

        signs = chords.chord_signs(diagram)
        index, degree = chords.degree_from_diagram(signs)
        report.update({
            'free_chords': chords.free_chords(diagram),
            'signs': signs.to_dict(),
            'index': index,
            'degree': degree,
            'canonical_form': list(chords.canonical_form(diagram))
        })
        return report, True

    def realize(self, args: argparse.Namespace) -> Tuple[dict, bool]:
        chords = self.app.chord_service
        if args.diagram is not None:
            if args.index is not None or args.degree is not None:
                raise UsageError("give either --diagram or --index and --degree, not both")
            diagram = self.load_diagram(args.diagram)
            polygon = chords.realize_diagram(diagram)
        elif args.index is not None and args.degree is not None:
            polygon = chords.realize_index_degree(args.index, args.degree)
        else:
            raise UsageError("realize needs --diagram FILE or both --index and --degree")

        return {
            'vertices': polygon.to_list(),
            'diagram': chords.extract_diagram(polygon, NORTH).to_dict(),
            'index': self.app.index_service.polygon_index(polygon, NORTH),
            'degree': self.app.degree_service.normal_degree(polygon, NORTH)
        }, True

    def analyze_mesh(self, args: argparse.Namespace) -> Tuple[dict, bool]:
        meshes = self.app.mesh_service
        mesh = meshes.load_off(args.file)
        xis = None if args.xi is None else [args.xi]
        report = meshes.analyze(mesh, xis, seed=self._seed(args), jobs=self._jobs(args),
                                three_critical=args.three_critical)
        holds = report.three_critical is None or bool(report.three_critical.get('holds'))
        return report.to_dict(), holds

    def verify(self, args: argparse.Namespace) -> Tuple[dict, bool]:
        names: List[str] = list(SUITES) if args.suite == 'all' else [args.suite]
        results = self.app.verification_service.run_suites(names, args.n, self._seed(args))
        failed = sum(r['failed'] for r in results)
        report = {
            'suites': results,
            'passed': sum(r['passed'] for r in results),
            'failed': failed,
            'skipped': sum(r['skipped'] for r in results),
            'max_residual': max(r['max_residual'] for r in results),
            'seed': self._seed(args)
        }
        return report, failed == 0

    # Dispatch

    def execute(self, args: argparse.Namespace) -> Tuple[int, dict]:
        """Runs the command; returns the exit code and the JSON-ready payload"""
        schema_version = self.settings.schema_version
        try:
            report, ok = self._handlers[args.command](args)
        except GaussMapError as e:
            self.logger.debug(f"{args.command} failed: {e.code} {e.message}")
            return e.exit_code, {'schema_version': schema_version, 'status': 'error', 'error': e.to_dict()}
        except ValueError as e:
            return UsageError.exit_code, {'schema_version': schema_version, 'status': 'error',
                                          'error': UsageError(str(e)).to_dict()}

        payload = {'schema_version': schema_version, 'command': args.command,
                   'status': 'ok' if ok else 'failed', **report}
        return (0 if ok else 2), payload

    def render(self, payload: dict, output: Optional[str] = None) -> str:
        output = output or self.settings.get('output.default_format', 'json')
        data = round_floats(payload, self.settings.float_digits)
        return json.dumps(data, sort_keys=True, indent=2 if output == 'pretty' else None)
