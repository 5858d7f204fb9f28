//! JSON documents for graphs, families and dynamical systems.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dynsys::DynSys;
use crate::error::{Error, Result};
use crate::kgraph::{Edge, KGraph};
use crate::sets::{ColorSet, VertexSet};
use crate::tuple::TupleFamily;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub color: usize,
    pub range: String,
    pub source: String,
}

/// A k-graph: skeleton plus squares `[e, f, f', e']` meaning `e·f = f'·e'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub k: usize,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub squares: Vec<[String; 4]>,
}

/// Components keyed by comma-joined sorted colors (`""` for the empty set).
/// Missing keys mean empty components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDocument {
    pub components: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub color: usize,
    /// `[v, σ(v)]` pairs; points not listed are outside the domain.
    pub pairs: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynSysDocument {
    pub d: usize,
    pub carrier: Vec<String>,
    #[serde(default)]
    pub maps: Vec<MapDoc>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::input(format!("malformed JSON: {e}"))
}

fn index_of(names: &[String], name: &str) -> Result<usize> {
    names
        .iter()
        .position(|v| v == name)
        .ok_or_else(|| Error::input(format!("unknown vertex '{name}'")))
}

impl GraphDocument {
    pub fn to_graph(&self) -> Result<KGraph> {
        let mut edges = Vec::new();
        for e in &self.edges {
            edges.push(Edge {
                id: e.id.clone(),
                color: e.color,
                range: index_of(&self.vertices, &e.range)?,
                source: index_of(&self.vertices, &e.source)?,
            });
        }
        let eidx = |id: &str| {
            edges
                .iter()
                .position(|e| e.id == id)
                .ok_or_else(|| Error::input(format!("unknown edge '{id}'")))
        };
        let mut squares = Vec::new();
        for q in &self.squares {
            squares.push([eidx(&q[0])?, eidx(&q[1])?, eidx(&q[2])?, eidx(&q[3])?]);
        }
        KGraph::new(self.k, self.vertices.clone(), edges, squares)
    }

    pub fn from_graph(g: &KGraph) -> Self {
        let name = |v: usize| g.vertices()[v].clone();
        let id = |e: usize| g.edge(e).id.clone();
        GraphDocument {
            k: g.k(),
            vertices: g.vertices().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc { id: e.id.clone(), color: e.color, range: name(e.range), source: name(e.source) })
                .collect(),
            squares: g.squares().iter().map(|q| q.map(id)).collect(),
        }
    }
}

pub fn parse_graph(json: &str) -> Result<KGraph> {
    serde_json::from_str::<GraphDocument>(json).map_err(json_error)?.to_graph()
}

pub fn graph_to_json(g: &KGraph) -> String {
    serde_json::to_string_pretty(&GraphDocument::from_graph(g)).expect("documents serialize")
}

/// `"1,2"` for `{1,2}`, `""` for the empty set.
pub fn color_key(f: ColorSet) -> String {
    f.colors().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

/// Parse `"1,2"` (any order, spaces allowed) into a color set inside `[k]`.
pub fn parse_colors(key: &str, k: usize) -> Result<ColorSet> {
    let mut f = ColorSet::EMPTY;
    for part in key.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let c: usize = part.parse().map_err(|_| Error::input(format!("bad color '{part}'")))?;
        if c == 0 || c > k {
            return Err(Error::input(format!("color {c} outside 1..={k}")));
        }
        if f.contains(c) {
            return Err(Error::input(format!("color {c} repeated in '{key}'")));
        }
        f = f.with(c);
    }
    Ok(f)
}

/// Parse `"u,w"` into a vertex set (empty string for the empty set).
pub fn parse_vertex_list(names: &[String], list: &str) -> Result<VertexSet> {
    let mut s = VertexSet::EMPTY;
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        s.insert(index_of(names, part)?);
    }
    Ok(s)
}

fn names_of(names: &[String], s: VertexSet) -> Vec<String> {
    s.iter().map(|v| names[v].clone()).collect()
}

/// Document listing every component, empty ones included.
pub fn family_to_doc_named(names: &[String], h: &TupleFamily) -> FamilyDocument {
    let components = (0..1usize << h.k())
        .map(ColorSet::from_mask)
        .map(|f| (color_key(f), names_of(names, h.get(f))))
        .collect();
    FamilyDocument { components }
}

pub fn family_to_doc(g: &KGraph, h: &TupleFamily) -> FamilyDocument {
    family_to_doc_named(g.vertices(), h)
}

pub fn family_from_doc_named(names: &[String], k: usize, doc: &FamilyDocument) -> Result<TupleFamily> {
    let mut h = TupleFamily::empty(k);
    let mut seen = vec![false; 1 << k];
    for (key, members) in &doc.components {
        let f = parse_colors(key, k)?;
        if std::mem::replace(&mut seen[f.mask()], true) {
            return Err(Error::input(format!("component {f} given twice")));
        }
        let mut s = VertexSet::EMPTY;
        for m in members {
            s.insert(index_of(names, m)?);
        }
        h.set(f, s);
    }
    Ok(h)
}

pub fn family_from_doc(g: &KGraph, doc: &FamilyDocument) -> Result<TupleFamily> {
    family_from_doc_named(g.vertices(), g.k(), doc)
}

pub fn parse_family(g: &KGraph, json: &str) -> Result<TupleFamily> {
    family_from_doc(g, &serde_json::from_str(json).map_err(json_error)?)
}

pub fn parse_family_named(names: &[String], k: usize, json: &str) -> Result<TupleFamily> {
    family_from_doc_named(names, k, &serde_json::from_str(json).map_err(json_error)?)
}

pub fn family_to_json(g: &KGraph, h: &TupleFamily) -> String {
    serde_json::to_string_pretty(&family_to_doc(g, h)).expect("documents serialize")
}

impl DynSysDocument {
    pub fn to_dynsys(&self) -> Result<DynSys> {
        let n = self.carrier.len();
        let mut maps = vec![vec![None; n]; self.d];
        let mut seen = vec![false; self.d];
        for m in &self.maps {
            if m.color == 0 || m.color > self.d {
                return Err(Error::input(format!("map color {} outside 1..={}", m.color, self.d)));
            }
            if std::mem::replace(&mut seen[m.color - 1], true) {
                return Err(Error::input(format!("map {} given twice", m.color)));
            }
            for [a, b] in &m.pairs {
                let (x, y) = (index_of(&self.carrier, a)?, index_of(&self.carrier, b)?);
                if maps[m.color - 1][x].replace(y).is_some() {
                    return Err(Error::input(format!("map {} assigns '{a}' twice", m.color)));
                }
            }
        }
        DynSys::new(self.d, self.carrier.clone(), maps)
    }

    pub fn from_dynsys(ds: &DynSys) -> Self {
        let names = ds.carrier();
        DynSysDocument {
            d: ds.d(),
            carrier: names.to_vec(),
            maps: (1..=ds.d())
                .map(|c| MapDoc {
                    color: c,
                    pairs: (0..names.len())
                        .filter_map(|v| ds.apply(c, v).map(|w| [names[v].clone(), names[w].clone()]))
                        .collect(),
                })
                .collect(),
        }
    }
}

pub fn parse_dynsys(json: &str) -> Result<DynSys> {
    serde_json::from_str::<DynSysDocument>(json).map_err(json_error)?.to_dynsys()
}

pub fn dynsys_to_json(ds: &DynSys) -> String {
    serde_json::to_string_pretty(&DynSysDocument::from_dynsys(ds)).expect("documents serialize")
}
