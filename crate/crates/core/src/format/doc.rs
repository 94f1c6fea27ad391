//! The canonical instance document: JSON with sorted keys, scalar arrays on
//! one line, two-space indentation and integers only, so that the same
//! instance always serializes to the same bytes.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::model::{AdditiveProfile, Instance, Oracle, SubmodularProfile, TabularOracle, ValueSet, Valuation};
use crate::reductions::bounds::{compute_bounds, parse_rational, BoundKind, BoundParams, GapCertificate};
use crate::reductions::{
    gen_mew_goods, gen_mew_mixed, gen_mew_rx3c, gen_mew_two_negative, gen_mnw_bivalued3c, gen_mnw_sat, gen_mnw_vc,
    Cnf2p2n, Graph3Reg, Label, ReducedInstance, ReductionKind, Rx3cGadget, Rx3cInstance, SourceRef,
};

pub const DOC_VERSION: &str = "ternfair/1";

/// Serializes a JSON value canonically. Object keys come out sorted because
/// `serde_json::Map` is ordered.
pub fn to_canonical(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_scalar(out: &mut String, v: &Value) {
    out.push_str(&serde_json::to_string(v).expect("scalars always serialize"));
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_scalar(out, x);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.values().all(is_scalar) && map.len() <= 4 => {
            out.push('{');
            for (i, (k, x)) in map.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_scalar(out, &Value::String(k.clone()));
                out.push_str(": ");
                write_scalar(out, x);
            }
            out.push('}');
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_scalar(out, &Value::String(k.clone()));
                out.push_str(": ");
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => write_scalar(out, scalar),
    }
}

/// Parameters needed to regenerate a reduced instance from its source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionInfo {
    pub kind: ReductionKind,
    pub params: Vec<(String, i64)>,
    pub source: SourceRef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDocument {
    pub agents: Vec<Label>,
    pub items: Vec<Label>,
    pub instance: Instance,
    pub certificate: Option<GapCertificate>,
    pub reduction: Option<ReductionInfo>,
}

impl InstanceDocument {
    /// A bare instance with generated names `a1..`, `o1..` and empty roles.
    pub fn plain(instance: Instance) -> Self {
        let agents = (1..=instance.agents()).map(|i| Label::new(format!("a{i}"), "")).collect();
        let items = (1..=instance.items()).map(|i| Label::new(format!("o{i}"), "")).collect();
        InstanceDocument { agents, items, instance, certificate: None, reduction: None }
    }

    pub fn from_reduced(r: &ReducedInstance) -> Self {
        InstanceDocument {
            agents: r.agents.clone(),
            items: r.items.clone(),
            instance: r.instance.clone(),
            certificate: Some(r.certificate.clone()),
            reduction: Some(ReductionInfo { kind: r.kind, params: r.params.clone(), source: r.source.clone() }),
        }
    }

    /// Rebuilds the reduced instance from the reduction block and checks
    /// that it matches the stored instance and labels.
    pub fn to_reduced(&self) -> Result<ReducedInstance> {
        let info = self
            .reduction
            .as_ref()
            .ok_or_else(|| Error::schema("$.reduction", "document has no reduction block"))?;
        let r = regenerate(info)?;
        if r.instance != self.instance || r.agents != self.agents || r.items != self.items {
            return Err(Error::schema("$.valuation", "instance does not match its reduction block"));
        }
        if self.certificate.as_ref().is_some_and(|c| *c != r.certificate) {
            return Err(Error::schema("$.certificate", "certificate does not match its reduction block"));
        }
        Ok(r)
    }
}

fn param(info: &ReductionInfo, name: &str) -> Result<i64> {
    info.params
        .iter()
        .find(|(k, _)| k == name)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::schema(format!("$.reduction.params.{name}"), "missing parameter"))
}

fn regenerate(info: &ReductionInfo) -> Result<ReducedInstance> {
    let p = |name| param(info, name);
    let wrong = || Error::schema("$.reduction.source", format!("source type does not fit {}", info.kind));
    match (&info.source, info.kind) {
        (SourceRef::Cnf(phi), ReductionKind::MnwSat) => gen_mnw_sat(phi, p("a")?, p("b")?, p("c")?),
        (SourceRef::Cnf(phi), ReductionKind::MewGoods) => gen_mew_goods(phi, p("a")?, p("b")?, p("c")?),
        (SourceRef::Cnf(phi), ReductionKind::MewMixed) => gen_mew_mixed(phi, p("a")?, p("c")?),
        (SourceRef::Cnf(phi), ReductionKind::MewTwoNegative) => gen_mew_two_negative(phi, p("b")?, p("kstar")?),
        (SourceRef::Graph { graph, k }, ReductionKind::MnwVc) => gen_mnw_vc(graph, *k, p("a")?, p("b")?, p("c")?),
        (SourceRef::Graph { graph, k }, ReductionKind::MnwBivalued3c) => gen_mnw_bivalued3c(graph, *k, p("c")?),
        (SourceRef::Rx3c(r), ReductionKind::MewRx3c) => gen_mew_rx3c(r),
        _ => Err(wrong()),
    }
}

fn labels_doc(labels: &[Label]) -> Value {
    Value::Array(labels.iter().map(|l| json!({"name": l.name, "role": l.role})).collect())
}

fn valuation_doc(instance: &Instance) -> Value {
    match instance.valuation() {
        Valuation::Additive(p) => json!({
            "type": "additive",
            "values": p.value_set().values(),
            "matrix": p.matrix(),
        }),
        Valuation::Submodular(p) => {
            let oracles: Vec<Value> = p
                .oracles()
                .iter()
                .map(|o| match o {
                    Oracle::Tabular(t) => json!({"type": "tabular", "table": t.table()}),
                    Oracle::Rx3cGadget(g) => {
                        let triple: Vec<usize> = g.triple().iter().map(|e| e + 1).collect();
                        json!({"type": "rx3c_gadget", "k": g.k(), "triple": triple})
                    }
                })
                .collect();
            json!({
                "type": "submodular",
                "items": p.items(),
                "marginal_set": p.marginal_set().values(),
                "oracles": oracles,
            })
        }
    }
}

pub fn certificate_doc(c: &GapCertificate) -> Value {
    let mut map = Map::new();
    map.insert("kind".into(), json!(c.kind.name()));
    map.insert("objective".into(), json!(c.objective.name()));
    map.insert("regime".into(), json!(c.regime.name()));
    map.insert("values".into(), json!(c.values));
    map.insert("epsilon".into(), json!(c.epsilon.to_string()));
    if let Some((v, k)) = c.graph {
        map.insert("vertices".into(), json!(v));
        map.insert("k".into(), json!(k));
    }
    map.insert("yes_value".into(), json!(c.yes_value.to_string()));
    map.insert("no_bound".into(), json!(c.no_bound.to_string()));
    if let Some(r) = &c.ratio {
        map.insert("ratio".into(), json!(format!("{r} ~ {:.10}", r.approx())));
    }
    Value::Object(map)
}

fn source_doc(source: &SourceRef) -> Value {
    match source {
        SourceRef::Cnf(phi) => json!({"type": "cnf2p2n", "variables": phi.variables(), "clauses": phi.clauses()}),
        SourceRef::Graph { graph, k } => {
            let edges: Vec<[usize; 2]> = graph.edges().iter().map(|&(u, v)| [u + 1, v + 1]).collect();
            json!({"type": "graph3reg", "vertices": graph.vertices(), "edges": edges, "k": k})
        }
        SourceRef::Rx3c(r) => {
            let triples: Vec<Vec<usize>> = r.triples().iter().map(|t| t.iter().map(|e| e + 1).collect()).collect();
            json!({"type": "rx3c", "k": r.k(), "triples": triples})
        }
    }
}

pub fn instance_doc(doc: &InstanceDocument) -> Value {
    let mut map = Map::new();
    map.insert("document".into(), json!("instance"));
    map.insert("version".into(), json!(DOC_VERSION));
    map.insert("agents".into(), labels_doc(&doc.agents));
    map.insert("items".into(), labels_doc(&doc.items));
    map.insert("valuation".into(), valuation_doc(&doc.instance));
    if let Some(c) = &doc.certificate {
        map.insert("certificate".into(), certificate_doc(c));
    }
    if let Some(r) = &doc.reduction {
        let params: Map<String, Value> = r.params.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        map.insert(
            "reduction".into(),
            json!({"kind": r.kind.name(), "params": params, "source": source_doc(&r.source)}),
        );
    }
    Value::Object(map)
}

pub fn store_instance(doc: &InstanceDocument) -> String {
    to_canonical(&instance_doc(doc))
}

// ---- reading ----

struct Node<'a> {
    value: &'a Value,
    path: String,
}

impl<'a> Node<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::schema(self.path.clone(), message)
    }

    fn object(&self) -> Result<&'a Map<String, Value>> {
        self.value.as_object().ok_or_else(|| self.err("expected an object"))
    }

    fn field(&self, key: &str) -> Result<Node<'a>> {
        let map = self.object()?;
        let value = map.get(key).ok_or_else(|| Error::schema(format!("{}.{key}", self.path), "missing field"))?;
        Ok(Node { value, path: format!("{}.{key}", self.path) })
    }

    fn opt(&self, key: &str) -> Result<Option<Node<'a>>> {
        Ok(self.object()?.get(key).map(|value| Node { value, path: format!("{}.{key}", self.path) }))
    }

    fn only(&self, keys: &[&str]) -> Result<()> {
        for k in self.object()?.keys() {
            if !keys.contains(&k.as_str()) {
                return Err(Error::schema(format!("{}.{k}", self.path), "unknown field"));
            }
        }
        Ok(())
    }

    fn array(&self) -> Result<Vec<Node<'a>>> {
        let items = self.value.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(items.iter().enumerate().map(|(i, value)| Node { value, path: format!("{}[{i}]", self.path) }).collect())
    }

    fn str(&self) -> Result<&'a str> {
        self.value.as_str().ok_or_else(|| self.err("expected a string"))
    }

    fn i64(&self) -> Result<i64> {
        self.value.as_i64().ok_or_else(|| self.err("expected an integer"))
    }

    fn usize(&self) -> Result<usize> {
        self.value.as_u64().map(|v| v as usize).ok_or_else(|| self.err("expected a non-negative integer"))
    }

    fn i64s(&self) -> Result<Vec<i64>> {
        self.array()?.iter().map(|n| n.i64()).collect()
    }

    fn usizes(&self) -> Result<Vec<usize>> {
        self.array()?.iter().map(|n| n.usize()).collect()
    }

    fn at<T>(&self, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::Schema { .. } | Error::Parse { .. } => e,
            other => self.err(other.to_string()),
        })
    }
}

fn one_indexed<const N: usize>(node: &Node, limit: usize) -> Result<[usize; N]> {
    let v = node.usizes()?;
    let arr: [usize; N] = v.as_slice().try_into().map_err(|_| node.err(format!("expected {N} entries")))?;
    if arr.iter().any(|&x| x == 0 || x > limit) {
        return Err(node.err(format!("index out of range 1..={limit}")));
    }
    Ok(arr.map(|x| x - 1))
}

fn read_labels(node: &Node) -> Result<Vec<Label>> {
    node.array()?
        .iter()
        .map(|n| {
            n.only(&["name", "role"])?;
            Ok(Label::new(n.field("name")?.str()?, n.field("role")?.str()?))
        })
        .collect()
}

fn read_valuation(node: &Node) -> Result<Instance> {
    let ty = node.field("type")?;
    match ty.str()? {
        "additive" => {
            node.only(&["type", "values", "matrix"])?;
            let values = node.field("values")?;
            let vs = values.at(ValueSet::new(&values.i64s()?))?;
            let m = node.field("matrix")?;
            let matrix = m.array()?.iter().map(|row| row.i64s()).collect::<Result<Vec<_>>>()?;
            Ok(Instance::additive(m.at(AdditiveProfile::new(matrix, vs))?))
        }
        "submodular" => {
            node.only(&["type", "items", "marginal_set", "oracles"])?;
            let items = node.field("items")?.usize()?;
            let ms = node.field("marginal_set")?;
            let marginal_set = ms.at(ValueSet::new(&ms.i64s()?))?;
            let list = node.field("oracles")?;
            let mut oracles = Vec::new();
            for o in list.array()? {
                let oracle = match o.field("type")?.str()? {
                    "tabular" => {
                        o.only(&["type", "table"])?;
                        let t = o.field("table")?;
                        Oracle::Tabular(t.at(TabularOracle::new(items, t.i64s()?))?)
                    }
                    "rx3c_gadget" => {
                        o.only(&["type", "k", "triple"])?;
                        let k = o.field("k")?.usize()?;
                        let triple = one_indexed::<3>(&o.field("triple")?, 3 * k)?;
                        let g = o.at(Rx3cGadget::new(k, triple))?;
                        if 9 * k != items {
                            return Err(o.err(format!("gadget covers {} items, block declares {items}", 9 * k)));
                        }
                        Oracle::Rx3cGadget(g)
                    }
                    other => return Err(o.field("type")?.err(format!("unknown oracle type '{other}'"))),
                };
                oracles.push(oracle);
            }
            Ok(Instance::submodular(list.at(SubmodularProfile::new(oracles, marginal_set))?))
        }
        other => Err(ty.err(format!("unknown valuation type '{other}'"))),
    }
}

fn read_source(node: &Node) -> Result<SourceRef> {
    let ty = node.field("type")?;
    match ty.str()? {
        "cnf2p2n" => {
            node.only(&["type", "variables", "clauses"])?;
            let n = node.field("variables")?.usize()?;
            let clauses = node
                .field("clauses")?
                .array()?
                .iter()
                .map(|c| {
                    let v = c.i64s()?;
                    v.as_slice().try_into().map_err(|_| c.err("expected 3 literals"))
                })
                .collect::<Result<Vec<[i64; 3]>>>()?;
            Ok(SourceRef::Cnf(node.at(Cnf2p2n::new(n, clauses))?))
        }
        "graph3reg" => {
            node.only(&["type", "vertices", "edges", "k"])?;
            let nv = node.field("vertices")?.usize()?;
            let edges = node
                .field("edges")?
                .array()?
                .iter()
                .map(|e| one_indexed::<2>(e, nv).map(|[u, v]| (u, v)))
                .collect::<Result<Vec<_>>>()?;
            let k = node.field("k")?.usize()?;
            Ok(SourceRef::Graph { graph: node.at(Graph3Reg::new(nv, edges))?, k })
        }
        "rx3c" => {
            node.only(&["type", "k", "triples"])?;
            let k = node.field("k")?.usize()?;
            let triples = node
                .field("triples")?
                .array()?
                .iter()
                .map(|t| one_indexed::<3>(t, 3 * k))
                .collect::<Result<Vec<_>>>()?;
            Ok(SourceRef::Rx3c(node.at(Rx3cInstance::new(k, triples))?))
        }
        other => Err(ty.err(format!("unknown source type '{other}'"))),
    }
}

fn read_certificate(node: &Node) -> Result<GapCertificate> {
    node.only(&["kind", "objective", "regime", "values", "epsilon", "vertices", "k", "yes_value", "no_bound", "ratio"])?;
    let kind_node = node.field("kind")?;
    let kind: BoundKind = kind_node.at(kind_node.str()?.parse())?;
    let values = node.field("values")?.i64s()?;
    let eps_node = node.field("epsilon")?;
    let epsilon = eps_node.at(parse_rational(eps_node.str()?))?;
    let mut params = BoundParams::new(&values).with_epsilon(epsilon);
    if let Some(v) = node.opt("vertices")? {
        params = params.with_graph(v.usize()?, node.field("k")?.usize()?);
    }
    let cert = node.at(compute_bounds(kind, &params))?;
    // the stored renderings must be exactly what the parameters produce
    let expected = certificate_doc(&cert);
    for (key, value) in node.object()? {
        if expected.get(key) != Some(value) {
            return Err(Error::schema(format!("{}.{key}", node.path), "does not match the recomputed certificate"));
        }
    }
    if expected.as_object().map(|m| m.len()) != Some(node.object()?.len()) {
        return Err(node.err("certificate block is missing fields"));
    }
    Ok(cert)
}

pub fn load_instance(text: &str) -> Result<InstanceDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    let root = Node { value: &value, path: "$".into() };
    root.only(&["document", "version", "agents", "items", "valuation", "certificate", "reduction"])?;
    let version = root.field("version")?;
    if version.str()? != DOC_VERSION {
        return Err(version.err(format!("unsupported version, expected '{DOC_VERSION}'")));
    }
    if let Some(d) = root.opt("document")? {
        if d.str()? != "instance" {
            return Err(d.err("expected an instance document"));
        }
    }
    let agents = read_labels(&root.field("agents")?)?;
    let items = read_labels(&root.field("items")?)?;
    let instance = read_valuation(&root.field("valuation")?)?;
    if agents.len() != instance.agents() {
        return Err(root.field("agents")?.err(format!("{} labels for {} agents", agents.len(), instance.agents())));
    }
    if items.len() != instance.items() {
        return Err(root.field("items")?.err(format!("{} labels for {} items", items.len(), instance.items())));
    }
    let certificate = root.opt("certificate")?.map(|c| read_certificate(&c)).transpose()?;
    let reduction = match root.opt("reduction")? {
        None => None,
        Some(r) => {
            r.only(&["kind", "params", "source"])?;
            let kn = r.field("kind")?;
            let kind: ReductionKind = kn.at(kn.str()?.parse())?;
            let pn = r.field("params")?;
            let params = pn
                .object()?
                .iter()
                .map(|(k, v)| Ok((k.clone(), Node { value: v, path: format!("{}.{k}", pn.path) }.i64()?)))
                .collect::<Result<Vec<_>>>()?;
            let source = read_source(&r.field("source")?)?;
            Some(ReductionInfo { kind, params, source })
        }
    };
    let doc = InstanceDocument { agents, items, instance, certificate, reduction };
    if let Some(info) = &doc.reduction {
        // keep generator parameter order, which the reduction block does not record
        let mut r = doc.clone();
        let regenerated = regenerate(info)?;
        r.reduction = Some(ReductionInfo { params: regenerated.params.clone(), ..info.clone() });
        if sorted(&regenerated.params) != sorted(&info.params) {
            return Err(Error::schema("$.reduction.params", "parameters do not match the generator's"));
        }
        r.to_reduced()?;
        return Ok(r);
    }
    Ok(doc)
}

fn sorted(p: &[(String, i64)]) -> Vec<(String, i64)> {
    let mut v = p.to_vec();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_layout() {
        let v = json!({"b": [1, 2], "a": {"x": [[1, -2], [3, 4]]}, "c": "s"});
        assert_eq!(to_canonical(&v), "{\n  \"a\": {\n    \"x\": [\n      [1, -2],\n      [3, 4]\n    ]\n  },\n  \"b\": [1, 2],\n  \"c\": \"s\"\n}\n");
    }

    #[test]
    fn plain_round_trip() {
        let inst = Instance::from_matrix(vec![vec![0, 1, 2], vec![2, 2, 0]], &[0, 1, 2]).unwrap();
        let text = store_instance(&InstanceDocument::plain(inst.clone()));
        let back = load_instance(&text).unwrap();
        assert_eq!(back.instance, inst);
        assert_eq!(store_instance(&back), text);
    }

    #[test]
    fn empty_item_list() {
        let inst = Instance::from_matrix(vec![vec![], vec![]], &[0, 1]).unwrap();
        let text = store_instance(&InstanceDocument::plain(inst));
        assert_eq!(load_instance(&text).unwrap().instance.items(), 0);
    }

    #[test]
    fn unknown_valuation_type() {
        let text = r#"{"version": "ternfair/1", "agents": [], "items": [], "valuation": {"type": "weird"}}"#;
        match load_instance(text) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "$.valuation.type"),
            other => panic!("{other:?}"),
        }
    }
}
