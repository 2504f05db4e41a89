//! Periodic graphs given by quotient data, and the finite pieces of their
//! infinite realization.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::algebra::{exponent, Exponent};
use crate::error::{ParseError, ParseErrorKind};

/// An edge of the quotient: vertex `i` in cell `c` is adjacent to vertex `j`
/// in cell `c - offset`. The reverse orientation is implied.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub offset: Exponent,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellVertex {
    pub cell: Exponent,
    pub vertex: usize,
}

impl CellVertex {
    pub fn new(cell: &[i32], vertex: usize) -> Self {
        CellVertex { cell: exponent(cell), vertex }
    }

    pub fn translated(&self, h: &[i32]) -> Self {
        CellVertex { cell: self.cell.iter().zip(h).map(|(a, b)| a + b).collect(), vertex: self.vertex }
    }
}

impl fmt::Debug for CellVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, w{})", self.cell.as_slice(), self.vertex + 1)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientGraph {
    dim: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    /// `incidence[i]` lists `(j, delta)`: `(c, i)` is adjacent to `(c + delta, j)`.
    incidence: Vec<Vec<(usize, Exponent)>>,
}

impl QuotientGraph {
    /// Validating constructor shared by the parser.
    pub fn new(dim: usize, vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self, ParseErrorKind> {
        let n = vertices.len();
        let mut seen = BTreeSet::new();
        for e in &edges {
            if e.i >= n || e.j >= n {
                return Err(ParseErrorKind::UnknownVertex(format!("#{}", e.i.max(e.j))));
            }
            if e.offset.len() != dim {
                return Err(ParseErrorKind::DimensionMismatch { expected: dim, found: e.offset.len() });
            }
            if e.i == e.j && e.offset.iter().all(|&x| x == 0) {
                return Err(ParseErrorKind::SelfLoop(vertices[e.i].clone()));
            }
            let rev: Exponent = e.offset.iter().map(|x| -x).collect();
            if !seen.insert((e.i, e.j, e.offset.clone())) || seen.contains(&(e.j, e.i, rev)) {
                return Err(ParseErrorKind::DuplicateEdge(format!(
                    "{} {} {:?}",
                    vertices[e.i],
                    vertices[e.j],
                    e.offset.as_slice()
                )));
            }
        }
        let mut incidence = vec![Vec::new(); n];
        for e in &edges {
            incidence[e.i].push((e.j, e.offset.iter().map(|x| -x).collect()));
            incidence[e.j].push((e.i, e.offset.clone()));
        }
        if let Some(i) = incidence.iter().position(|l| l.is_empty()) {
            return Err(ParseErrorKind::IsolatedVertex(vertices[i].clone()));
        }
        Ok(QuotientGraph { dim, vertices, edges, incidence })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn incidence(&self, i: usize) -> &[(usize, Exponent)] {
        &self.incidence[i]
    }

    /// Ambient degree; a loop edge `(i, i, g)` counts twice.
    pub fn degree(&self, i: usize) -> usize {
        self.incidence[i].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|i| self.degree(i)).collect()
    }

    /// Neighbours in the infinite graph, with multiplicity.
    pub fn neighbors(&self, v: &CellVertex) -> impl Iterator<Item = CellVertex> + '_ {
        let cell = v.cell.clone();
        self.incidence[v.vertex]
            .iter()
            .map(move |(j, delta)| CellVertex { cell: cell.iter().zip(delta).map(|(a, b)| a + b).collect(), vertex: *j })
    }

    /// Cells `g` with `|g|_inf <= j`, in lexicographic order.
    pub fn folner_ball(&self, j: usize) -> Vec<Exponent> {
        cube(self.dim, -(j as i32), j as i32)
    }

    /// `F_j`: the ball's cells crossed with the fundamental domain.
    pub fn folner_vertices(&self, j: usize) -> BTreeSet<CellVertex> {
        self.cells_times_domain(&self.folner_ball(j))
    }

    pub fn cells_times_domain(&self, cells: &[Exponent]) -> BTreeSet<CellVertex> {
        cells
            .iter()
            .flat_map(|c| (0..self.n()).map(move |i| CellVertex { cell: c.clone(), vertex: i }))
            .collect()
    }

    /// Vertices outside `f` within graph distance `r` of it, found by `r`
    /// rounds of lazy breadth-first expansion.
    pub fn thick_boundary(&self, f: &BTreeSet<CellVertex>, r: usize) -> BTreeSet<CellVertex> {
        let mut out = BTreeSet::new();
        let mut frontier: Vec<CellVertex> = f.iter().cloned().collect();
        for _ in 0..r {
            let mut next = Vec::new();
            for v in &frontier {
                for u in self.neighbors(v) {
                    if !f.contains(&u) && out.insert(u.clone()) {
                        next.push(u);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        out
    }

    /// The subgraph induced on `s`.
    pub fn induced_section(&self, s: &BTreeSet<CellVertex>) -> FiniteSection {
        let vertices: Vec<CellVertex> = s.iter().cloned().collect();
        let index: HashMap<&CellVertex, usize> = vertices.iter().enumerate().map(|(k, v)| (v, k)).collect();
        let mut adjacency = Vec::new();
        let mut degrees_internal = vec![0; vertices.len()];
        for (a, v) in vertices.iter().enumerate() {
            for u in self.neighbors(v) {
                if let Some(&b) = index.get(&u) {
                    degrees_internal[a] += 1;
                    if a < b {
                        adjacency.push((a, b));
                    }
                }
            }
        }
        let degrees_ambient = vertices.iter().map(|v| self.degree(v.vertex)).collect();
        FiniteSection { vertices, adjacency, degrees_internal, degrees_ambient }
    }

    /// Renders the graph in the text format accepted by [`parse_graph`].
    pub fn to_text(&self) -> String {
        let mut s = format!("dim {}\nvertices {}\n", self.dim, self.vertices.join(" "));
        for e in &self.edges {
            s.push_str(&format!("edge {} {}", self.vertices[e.i], self.vertices[e.j]));
            for g in &e.offset {
                s.push_str(&format!(" {g}"));
            }
            s.push('\n');
        }
        s
    }

    /// A copy with the last nonzero offset of the last offset-carrying edge
    /// negated.
    pub fn corrupted(&self) -> Self {
        let mut edges = self.edges.clone();
        if let Some(e) = edges.iter_mut().rev().find(|e| e.offset.iter().any(|&x| x != 0)) {
            let k = e.offset.iter().rposition(|&x| x != 0).unwrap();
            e.offset[k] = -e.offset[k];
        }
        QuotientGraph::new(self.dim, self.vertices.clone(), edges).unwrap_or_else(|_| self.clone())
    }
}

/// All integer vectors of length `d` with entries in `lo..=hi`, lexicographic.
pub fn cube(d: usize, lo: i32, hi: i32) -> Vec<Exponent> {
    let mut out = vec![Exponent::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// A finite induced subgraph of the infinite realization.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteSection {
    pub vertices: Vec<CellVertex>,
    /// Index pairs `(a, b)` with `a < b`.
    pub adjacency: Vec<(usize, usize)>,
    pub degrees_internal: Vec<usize>,
    pub degrees_ambient: Vec<usize>,
}

impl FiniteSection {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(k),
            (true, Some(s)) => {
                out.push((s, &line[s..k]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the line-oriented graph format:
///
/// ```text
/// dim <d>
/// vertices <label> ...
/// edge <label_i> <label_j> <g_1> ... <g_d>
/// ```
///
/// `#` starts a comment. Declaration order of vertices fixes all row and
/// column conventions downstream.
pub fn parse_graph(text: &str) -> Result<QuotientGraph, ParseError> {
    let err = |line: usize, column: usize, kind: ParseErrorKind| ParseError { line, column, kind };
    let mut dim: Option<usize> = None;
    let mut labels: Option<(Vec<String>, HashMap<String, usize>)> = None;
    let mut edges = Vec::new();
    let mut seen: BTreeMap<(usize, usize, Exponent), ()> = BTreeMap::new();
    let mut last_line = 0;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        last_line = line_no;
        let body = raw.split('#').next().unwrap_or("");
        let toks = tokens(body);
        let Some(&(col0, head)) = toks.first() else { continue };
        match head {
            "dim" => {
                if dim.is_some() {
                    return Err(err(line_no, col0, ParseErrorKind::Syntax("repeated `dim` declaration".into())));
                }
                if toks.len() != 2 {
                    return Err(err(line_no, col0, ParseErrorKind::Syntax("expected `dim <d>`".into())));
                }
                let (c, t) = toks[1];
                match t.parse::<usize>() {
                    Ok(d) if d > 0 => dim = Some(d),
                    _ => return Err(err(line_no, c, ParseErrorKind::Syntax(format!("invalid dimension `{t}`")))),
                }
            }
            "vertices" => {
                if dim.is_none() {
                    return Err(err(line_no, col0, ParseErrorKind::Missing("dim")));
                }
                if labels.is_some() {
                    return Err(err(line_no, col0, ParseErrorKind::Syntax("repeated `vertices` declaration".into())));
                }
                if toks.len() < 2 {
                    return Err(err(line_no, col0, ParseErrorKind::Syntax("no vertex labels".into())));
                }
                let mut names = Vec::new();
                let mut index = HashMap::new();
                for &(c, t) in &toks[1..] {
                    if !valid_label(t) {
                        return Err(err(line_no, c, ParseErrorKind::Syntax(format!("invalid label `{t}`"))));
                    }
                    if index.insert(t.to_string(), names.len()).is_some() {
                        return Err(err(line_no, c, ParseErrorKind::DuplicateVertex(t.to_string())));
                    }
                    names.push(t.to_string());
                }
                labels = Some((names, index));
            }
            "edge" => {
                let d = dim.ok_or_else(|| err(line_no, col0, ParseErrorKind::Missing("dim")))?;
                let (names, index) = labels.as_ref().ok_or_else(|| err(line_no, col0, ParseErrorKind::Missing("vertices")))?;
                if toks.len() < 3 {
                    return Err(err(line_no, col0, ParseErrorKind::Syntax("expected `edge <i> <j> <offset...>`".into())));
                }
                let lookup = |(c, t): (usize, &str)| {
                    index.get(t).copied().ok_or_else(|| err(line_no, c, ParseErrorKind::UnknownVertex(t.to_string())))
                };
                let i = lookup(toks[1])?;
                let j = lookup(toks[2])?;
                let mut offset = Exponent::new();
                for &(c, t) in &toks[3..] {
                    let g = t
                        .parse::<i32>()
                        .map_err(|_| err(line_no, c, ParseErrorKind::Syntax(format!("invalid offset `{t}`"))))?;
                    offset.push(g);
                }
                let at = toks.get(3).map_or(toks[2].0, |t| t.0);
                if offset.len() != d {
                    return Err(err(line_no, at, ParseErrorKind::DimensionMismatch { expected: d, found: offset.len() }));
                }
                if i == j && offset.iter().all(|&g| g == 0) {
                    return Err(err(line_no, col0, ParseErrorKind::SelfLoop(names[i].clone())));
                }
                let rev: Exponent = offset.iter().map(|g| -g).collect();
                if seen.contains_key(&(i, j, offset.clone())) || seen.contains_key(&(j, i, rev)) {
                    return Err(err(
                        line_no,
                        col0,
                        ParseErrorKind::DuplicateEdge(format!("{} {} {:?}", names[i], names[j], offset.as_slice())),
                    ));
                }
                seen.insert((i, j, offset.clone()), ());
                edges.push(Edge { i, j, offset });
            }
            other => {
                return Err(err(line_no, col0, ParseErrorKind::Syntax(format!("unknown directive `{other}`"))));
            }
        }
    }
    let end = last_line + 1;
    let d = dim.ok_or_else(|| err(end, 1, ParseErrorKind::Missing("dim")))?;
    let (names, _) = labels.ok_or_else(|| err(end, 1, ParseErrorKind::Missing("vertices")))?;
    QuotientGraph::new(d, names, edges).map_err(|kind| err(end, 1, kind))
}

/// Graph documents shipped with the library.
pub mod builtins {
    use super::{parse_graph, QuotientGraph};
    use crate::error::ParseError;

    pub const KAGOME: &str = "\
# kagome lattice: three sites per cell, 4-regular
dim 2
vertices w1 w2 w3
edge w1 w2 0 0
edge w1 w2 0 1
edge w1 w3 0 0
edge w1 w3 1 0
edge w2 w3 0 0
edge w2 w3 1 -1
";

    pub const SQUARE: &str = "\
# square lattice as the Cayley graph of Z^2
dim 2
vertices w1
edge w1 w1 1 0
edge w1 w1 0 1
";

    pub const CYCLE: &str = "\
# the integers as their own Cayley graph
dim 1
vertices w1
edge w1 w1 1
";

    pub const COMB2: &str = "\
# a chain with two pendant leaves per cell
dim 1
vertices b p1 p2
edge b b 1
edge b p1 0
edge b p2 0
";

    pub const NAMES: [&str; 4] = ["kagome", "square", "cycle", "comb2"];

    pub fn source(name: &str) -> Option<&'static str> {
        match name {
            "kagome" => Some(KAGOME),
            "square" => Some(SQUARE),
            "cycle" => Some(CYCLE),
            "comb2" => Some(COMB2),
            _ => None,
        }
    }

    /// Parses a builtin through the public parser; `None` for an unknown name.
    pub fn load(name: &str) -> Option<Result<QuotientGraph, ParseError>> {
        source(name).map(parse_graph)
    }

    pub fn kagome() -> QuotientGraph {
        parse_graph(KAGOME).expect("builtin parses")
    }

    pub fn square() -> QuotientGraph {
        parse_graph(SQUARE).expect("builtin parses")
    }

    pub fn cycle() -> QuotientGraph {
        parse_graph(CYCLE).expect("builtin parses")
    }

    pub fn comb2() -> QuotientGraph {
        parse_graph(COMB2).expect("builtin parses")
    }
}

#[cfg(test)]
mod tests {
    use super::builtins::*;
    use super::*;

    #[test]
    fn builtin_degrees() {
        assert_eq!(kagome().degrees(), vec![4, 4, 4]);
        assert_eq!(cycle().degrees(), vec![2]);
        assert_eq!(square().degrees(), vec![4]);
        assert_eq!(comb2().degrees(), vec![4, 1, 1]);
        assert_eq!((kagome().n(), kagome().dim()), (3, 2));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse_graph("dim 1\nvertices w1\nedge w1 w1 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 1));
        assert!(matches!(e.kind, ParseErrorKind::SelfLoop(_)));
        assert!(e.to_string().contains("self-loop"));

        let e = parse_graph("dim 1\nvertices a b\nedge a c 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 8));
        assert_eq!(e.kind, ParseErrorKind::UnknownVertex("c".into()));

        let e = parse_graph("dim 2\nvertices a b\nedge a b 0\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DimensionMismatch { expected: 2, found: 1 });

        let e = parse_graph("dim 1\nvertices a b\nedge a b 1\nedge b a -1\n").unwrap_err();
        assert_eq!(e.line, 4);
        assert!(matches!(e.kind, ParseErrorKind::DuplicateEdge(_)));

        let e = parse_graph("dim 1\nvertices a\nedge a a x\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 10));

        let e = parse_graph("dim 1\nvertices a b\nedge a a 1\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::IsolatedVertex("b".into()));

        let e = parse_graph("vertices a\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Missing("dim"));
    }

    #[test]
    fn comments_and_round_trip() {
        let g = parse_graph("# header\n\ndim 1   # d\nvertices a\nedge a a 2 # loop\n").unwrap();
        assert_eq!(g.degree(0), 2);
        assert_eq!(parse_graph(&g.to_text()).unwrap(), g);
        assert_eq!(parse_graph(&kagome().to_text()).unwrap(), kagome());
    }

    #[test]
    fn balls() {
        assert_eq!(square().folner_ball(1).len(), 9);
        assert_eq!(kagome().folner_vertices(2).len(), 75);
        assert_eq!(cycle().folner_ball(0), vec![exponent(&[0])]);
    }

    #[test]
    fn cycle_boundary_and_section() {
        let g = cycle();
        let f = g.folner_vertices(3);
        let b = g.thick_boundary(&f, 1);
        assert_eq!(b, [CellVertex::new(&[-4], 0), CellVertex::new(&[4], 0)].into_iter().collect());
        assert!(g.thick_boundary(&BTreeSet::new(), 2).is_empty());

        let s: BTreeSet<_> = (0..3).map(|c| CellVertex::new(&[c], 0)).collect();
        let sec = g.induced_section(&s);
        assert_eq!(sec.degrees_internal, vec![1, 2, 1]);
        assert_eq!(sec.degrees_ambient, vec![2, 2, 2]);
        assert_eq!(sec.adjacency.len(), 2);

        let one: BTreeSet<_> = [CellVertex::new(&[5], 0)].into_iter().collect();
        assert!(g.induced_section(&one).adjacency.is_empty());
    }

    #[test]
    fn kagome_boundary_properties() {
        let g = kagome();
        let f = g.folner_vertices(1);
        assert_eq!(f.len(), 27);
        let b = g.thick_boundary(&f, 1);
        assert!(!b.is_empty());
        for v in &b {
            assert!(!f.contains(v));
            assert!(g.neighbors(v).any(|u| f.contains(&u)));
        }
        let mut s = f.clone();
        s.extend(g.thick_boundary(&f, 2));
        let sec = g.induced_section(&s);
        for (k, v) in sec.vertices.iter().enumerate() {
            assert!(sec.degrees_internal[k] <= 4);
            if f.contains(v) {
                assert_eq!(sec.degrees_internal[k], 4);
            }
        }
    }

    #[test]
    fn orientation_matches_offsets() {
        // edge (w1, w2, (0,1)): w1 in cell c meets w2 in cell c - (0,1)
        let g = kagome();
        let v = CellVertex::new(&[0, 0], 0);
        let ns: Vec<_> = g.neighbors(&v).collect();
        assert!(ns.contains(&CellVertex::new(&[0, -1], 1)));
        assert!(ns.contains(&CellVertex::new(&[-1, 0], 2)));
        for u in &ns {
            assert!(g.neighbors(u).any(|w| w == v));
        }
    }

    #[test]
    fn corruption_changes_an_offset() {
        let g = kagome().corrupted();
        assert_eq!(g.edges()[5].offset.as_slice(), &[1, 1]);
        assert_ne!(g, kagome());
    }
}
