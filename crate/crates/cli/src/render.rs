//! JSON and text rendering of group elements, chains, labelings, and the
//! little cycle-expression parser for `--cycle`.

use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use treebdy_core::coeff::{CoefficientGroup, GroupElement};
use treebdy_core::distributions::Distribution;
use treebdy_core::graph::Graph;
use treebdy_core::homology::{Chain, Support};
use treebdy_core::Int;

/// Arbitrary-precision integers as JSON: a number when it fits i64, a decimal
/// string otherwise.
pub fn int_json(k: &Int) -> Value {
    match k.to_i64() {
        Some(v) => json!(v),
        None => json!(k.to_string()),
    }
}

/// Elements of cyclic groups as integers, others as coordinate arrays.
pub fn element_json(e: &GroupElement) -> Value {
    match e.as_int() {
        Some(k) => int_json(&k),
        None => {
            let mut coords: Vec<Value> = e.free_coords().iter().map(int_json).collect();
            coords.extend(e.torsion_coords().iter().map(|&t| json!(t)));
            Value::Array(coords)
        }
    }
}

pub fn group_json(m: &CoefficientGroup) -> Value {
    json!({ "rank": m.free_rank(), "torsion": m.torsion() })
}

/// `{edge name: coefficient}` with zero coefficients omitted.
pub fn chain_map(g: &Graph, chain: &Chain) -> Value {
    let mut map = Map::new();
    for (i, c) in chain.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let name = match chain.support() {
            Support::PosEdges => g.pos_edges()[i].name().to_owned(),
            Support::AllEdges => g.edge_name(treebdy_core::EdgeId(i)),
        };
        map.insert(name, element_json(c));
    }
    Value::Object(map)
}

/// Total labeling `{edge name: mass}`, all edges included.
pub fn lambda_map(g: &Graph, d: &Distribution) -> Value {
    let mut map = Map::new();
    for e in g.edges() {
        map.insert(g.edge_name(e), element_json(d.lambda(e)));
    }
    Value::Object(map)
}

/// Integer vector over all directed edges, zeros omitted.
pub fn vector_map(g: &Graph, v: &[Int]) -> Value {
    let mut map = Map::new();
    for e in g.edges() {
        if !v[e.index()].is_zero() {
            map.insert(g.edge_name(e), int_json(&v[e.index()]));
        }
    }
    Value::Object(map)
}

/// `a + 2b - 3c` rendering of an integer vector over all directed edges.
pub fn render_vector(g: &Graph, v: &[Int]) -> String {
    let mut out = String::new();
    for e in g.edges() {
        let k = &v[e.index()];
        if k.is_zero() {
            continue;
        }
        let sign = if k.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let mag = k.abs();
        if mag != Int::from(1) {
            out.push_str(&mag.to_string());
        }
        out.push_str(&g.edge_name(e));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Parses `a + 2b - 3c` (also `2*b`) into `(edge name, coefficient)` terms.
/// Names extend to the next `+`/`-`/whitespace, so names starting with a
/// digit need an explicit `1*`.
pub fn parse_cycle_expr(s: &str) -> Result<Vec<(String, i64)>, String> {
    let mut terms = Vec::new();
    let flat: String = s.split_whitespace().collect::<Vec<_>>().join("");
    if flat.is_empty() {
        return Err("empty cycle expression".into());
    }
    let bytes: Vec<char> = flat.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1i64;
        while i < bytes.len() && (bytes[i] == '+' || bytes[i] == '-') {
            if bytes[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        let digits_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let coeff: i64 = if digits_start == i {
            1
        } else {
            bytes[digits_start..i]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| "coefficient out of range".to_string())?
        };
        if i < bytes.len() && bytes[i] == '*' {
            i += 1;
        }
        let name_start = i;
        while i < bytes.len() && bytes[i] != '+' && bytes[i] != '-' {
            i += 1;
        }
        let name: String = bytes[name_start..i].iter().collect();
        if name.is_empty() {
            return Err(format!("missing edge name in cycle expression `{s}`"));
        }
        terms.push((name, sign * coeff));
    }
    Ok(terms)
}
