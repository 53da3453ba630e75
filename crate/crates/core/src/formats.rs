//! JSON file formats for weightings and list assignments.
//!
//! Weighting: `{"span": "p/q", "vertices": {"0": "p/q", ...}, "edges": {"u-v": "p/q", ...}}`,
//! keys in numeric order and `span` optional.
//! Lists: `{"vertices": {"0": ["1", "2"], ...}, "edges": {"u-v": ["1", "2"], ...}}`.

use std::collections::BTreeMap;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::graph::{weighted_degree, Element, Graph, GraphError, TotalWeighting};
use crate::rational::Rational;
use crate::weighting::{ListAssignment, OffsetWeighting};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Shape(String),
    #[error("bad number {text:?} for {key}")]
    Number { key: String, text: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn element_key(z: Element) -> String {
    z.to_string()
}

fn section<'a>(
    obj: &'a Map<String, Value>,
    name: &str,
) -> Result<&'a Map<String, Value>, FormatError> {
    match obj.get(name) {
        Some(Value::Object(m)) => Ok(m),
        Some(_) => Err(FormatError::Shape(format!("\"{name}\" must be an object"))),
        None => Ok(empty_map()),
    }
}

fn empty_map() -> &'static Map<String, Value> {
    static EMPTY: std::sync::OnceLock<Map<String, Value>> = std::sync::OnceLock::new();
    EMPTY.get_or_init(Map::new)
}

fn number(key: &str, v: &Value) -> Result<Rational, FormatError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    };
    text.parse().map_err(|_| FormatError::Number {
        key: key.to_string(),
        text,
    })
}

fn parse_element(key: &str, vertex: bool) -> Result<Element, FormatError> {
    let z: Element = key
        .parse()
        .map_err(|_| FormatError::Shape(format!("bad element key {key:?}")))?;
    match (z, vertex) {
        (Element::Vertex(_), true) | (Element::Edge(..), false) => Ok(z),
        _ => Err(FormatError::Shape(format!(
            "key {key:?} in the wrong section"
        ))),
    }
}

fn as_object(v: &Value) -> Result<&Map<String, Value>, FormatError> {
    v.as_object()
        .ok_or_else(|| FormatError::Shape("top level must be an object".into()))
}

pub fn parse_json(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))
}

pub fn weighting_to_json(g: &Graph, span: Option<&Rational>, w: &TotalWeighting) -> Value {
    let mut out = Map::new();
    if let Some(a) = span {
        out.insert("span".into(), Value::String(a.to_string()));
    }
    let vertices: Map<String, Value> = g
        .vertices()
        .map(|v| (v.to_string(), Value::String(w.vertex[v].to_string())))
        .collect();
    let edges: Map<String, Value> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| {
            (
                element_key(Element::Edge(u, v)),
                Value::String(w.edge[i].to_string()),
            )
        })
        .collect();
    out.insert("vertices".into(), Value::Object(vertices));
    out.insert("edges".into(), Value::Object(edges));
    Value::Object(out)
}

/// Reads a weighting; every element of `g` must be present.
pub fn weighting_from_json(
    g: &Graph,
    v: &Value,
) -> Result<(Option<Rational>, TotalWeighting), FormatError> {
    let obj = as_object(v)?;
    let span = obj.get("span").map(|s| number("span", s)).transpose()?;
    let mut map = BTreeMap::new();
    for (name, vertex) in [("vertices", true), ("edges", false)] {
        for (key, val) in section(obj, name)? {
            map.insert(parse_element(key, vertex)?, number(key, val)?);
        }
    }
    Ok((span, TotalWeighting::from_elements(g, &map)?))
}

pub fn lists_to_json(g: &Graph, lists: &ListAssignment) -> Value {
    let pair = |(lo, hi): &(Rational, Rational)| {
        Value::Array(vec![
            Value::String(lo.to_string()),
            Value::String(hi.to_string()),
        ])
    };
    let vertices: Map<String, Value> = g
        .vertices()
        .map(|v| (v.to_string(), pair(&lists.vertex[v])))
        .collect();
    let edges: Map<String, Value> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| (element_key(Element::Edge(u, v)), pair(&lists.edge[i])))
        .collect();
    let mut out = Map::new();
    out.insert("vertices".into(), Value::Object(vertices));
    out.insert("edges".into(), Value::Object(edges));
    Value::Object(out)
}

/// Reads a list file. Missing or foreign elements are reported by
/// [`ListAssignment::from_elements`] through the returned error.
pub fn lists_from_json(v: &Value) -> Result<BTreeMap<Element, (Rational, Rational)>, FormatError> {
    let obj = as_object(v)?;
    let mut map = BTreeMap::new();
    for (name, vertex) in [("vertices", true), ("edges", false)] {
        for (key, val) in section(obj, name)? {
            let z = parse_element(key, vertex)?;
            let pair = match val.as_array().map(Vec::as_slice) {
                Some([x, y]) => (number(key, x)?, number(key, y)?),
                _ => {
                    return Err(FormatError::Shape(format!(
                        "list of {key} must have two values"
                    )))
                }
            };
            map.insert(z, pair);
        }
    }
    Ok(map)
}

/// Graphviz text: vertices labeled `id : σ`, heavy elements drawn red and thick.
pub fn to_dot(g: &Graph, w: &TotalWeighting, heavy: Option<&OffsetWeighting>) -> String {
    let mut out = String::from("graph G {\n    node [shape=circle];\n");
    let style = |h: bool| if h { ", color=red, penwidth=2" } else { "" };
    for v in g.vertices() {
        let sigma = weighted_degree(g, w, v).expect("weighting matches the graph");
        let h = heavy.is_some_and(|off| off.vertex[v]);
        out += &format!("    {v} [label=\"{v} : {sigma}\"{}];\n", style(h));
    }
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        let h = heavy.is_some_and(|off| off.edge[i]);
        out += &format!("    {u} -- {v} [label=\"{}\"{}];\n", w.edge[i], style(h));
    }
    out.push_str("}\n");
    out
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn weighting_round_trip() {
        let g = triangle();
        let w = TotalWeighting {
            vertex: vec![
                Rational::new(1, 2),
                Rational::from_integer(-3),
                Rational::zero(),
            ],
            edge: vec![
                Rational::one(),
                Rational::new(-2, 3),
                Rational::from_integer(4),
            ],
        };
        let a = Rational::new(5, 2);
        let v = weighting_to_json(&g, Some(&a), &w);
        let text = to_pretty(&v);
        let (span, back) = weighting_from_json(&g, &parse_json(&text).unwrap()).unwrap();
        assert_eq!(span, Some(a));
        assert_eq!(back, w);
    }

    #[test]
    fn weighting_key_order_is_numeric() {
        let n = 12;
        let g = Graph::new(n, &[(2, 10), (2, 3)]).unwrap();
        let v = weighting_to_json(&g, None, &TotalWeighting::zero(&g));
        let keys: Vec<_> = v["vertices"].as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys[..3], ["0", "1", "2"]);
        assert_eq!(keys[11], "11");
        let ekeys: Vec<_> = v["edges"].as_object().unwrap().keys().cloned().collect();
        assert_eq!(ekeys, ["2-3", "2-10"]);
        assert!(v.get("span").is_none());
    }

    #[test]
    fn weighting_rejects_missing_and_bad() {
        let g = triangle();
        let v =
            parse_json(r#"{"vertices":{"0":"1","1":"1","2":"1"},"edges":{"0-1":"1","1-2":"1"}}"#)
                .unwrap();
        assert_eq!(
            weighting_from_json(&g, &v),
            Err(FormatError::Graph(GraphError::UndefinedWeight(
                Element::Edge(0, 2)
            )))
        );
        let v = parse_json(r#"{"vertices":{"0":"x"}}"#).unwrap();
        assert!(matches!(
            weighting_from_json(&g, &v),
            Err(FormatError::Number { .. })
        ));
        let v = parse_json(r#"{"vertices":{"0-1":"1"}}"#).unwrap();
        assert!(matches!(
            weighting_from_json(&g, &v),
            Err(FormatError::Shape(_))
        ));
        assert!(matches!(
            parse_json("{\"vertices\": {"),
            Err(FormatError::Json(_))
        ));
    }

    #[test]
    fn plain_json_numbers_accepted() {
        let g = Graph::empty(1);
        let v = parse_json(r#"{"vertices":{"0":2}}"#).unwrap();
        let (_, w) = weighting_from_json(&g, &v).unwrap();
        assert_eq!(w.vertex[0], Rational::from_integer(2));
    }

    #[test]
    fn dot_labels_and_styles() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let w = TotalWeighting {
            vertex: vec![Rational::zero(), Rational::one()],
            edge: vec![Rational::zero()],
        };
        let off = OffsetWeighting {
            span: Rational::one(),
            vertex: vec![false, true],
            edge: vec![false],
        };
        let dot = to_dot(&g, &w, Some(&off));
        assert_eq!(
            dot,
            "graph G {\n    node [shape=circle];\n    0 [label=\"0 : 0\"];\n    \
             1 [label=\"1 : 1\", color=red, penwidth=2];\n    0 -- 1 [label=\"0\"];\n}\n"
        );
    }

    #[test]
    fn lists_round_trip() {
        let g = triangle();
        let lists = ListAssignment::uniform(&g, &Rational::one(), &Rational::from_integer(2));
        let v = lists_to_json(&g, &lists);
        let map = lists_from_json(&v).unwrap();
        assert_eq!(ListAssignment::from_elements(&g, &map).unwrap(), lists);
        let bad = parse_json(r#"{"vertices":{"0":["1"]}}"#).unwrap();
        assert!(lists_from_json(&bad).is_err());
    }
}
