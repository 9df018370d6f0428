//! Text formats for tensors (`CQT1`) and homogeneous polynomials (`CQP1`).
//!
//! ```text
//! CQT1                      CQP1
//! order 3                   degree 3
//! dims 2 2 2                dim 2
//! 1 1 1 1 0 0 0             1 1 2 0.5 0 0 -1
//! ```
//!
//! Entry lines carry 1-based indices followed by the four components
//! `re i j k`. Unlisted entries are zero. Serialization writes nonzero
//! entries only, in row-major (tensor) or lexicographic (polynomial) order,
//! with the shortest round-trip decimal form of each component, so
//! `serialize(parse(s)) == s` for any `s` produced by `serialize`.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::forms::PolyProblem;
use crate::linalg::CQTensor;
use crate::quat::CQuat;

pub const TENSOR_MAGIC: &str = "CQT1";
pub const POLY_MAGIC: &str = "CQP1";
/// Refuse to allocate dense tensors beyond this many entries.
pub const MAX_ENTRIES: usize = 1 << 24;

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate() }
    }

    /// Next non-blank line with its 1-based number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        self.inner
            .by_ref()
            .map(|(i, l)| (i + 1, l.trim()))
            .find(|(_, l)| !l.is_empty())
    }

    fn header(&mut self, expected_line: usize, what: &str) -> Result<(usize, &'a str)> {
        self.next_content()
            .ok_or_else(|| perr(expected_line, format!("missing {what} line")))
    }
}

fn parse_keyword_values<'a>(line: usize, text: &'a str, key: &str) -> Result<Vec<&'a str>> {
    let mut toks = text.split_whitespace();
    match toks.next() {
        Some(k) if k == key => Ok(toks.collect()),
        _ => Err(perr(line, format!("expected `{key} ...`, found `{text}`"))),
    }
}

fn parse_count(line: usize, tok: &str, what: &str) -> Result<usize> {
    let v: usize = tok
        .parse()
        .map_err(|_| perr(line, format!("{what} `{tok}` is not a nonnegative integer")))?;
    if v == 0 {
        return Err(perr(line, format!("{what} must be >= 1")));
    }
    Ok(v)
}

fn parse_single(line: usize, text: &str, key: &str) -> Result<usize> {
    match parse_keyword_values(line, text, key)?.as_slice() {
        [tok] => parse_count(line, tok, key),
        _ => Err(perr(line, format!("expected `{key} <count>`"))),
    }
}

fn parse_entry(line: usize, text: &str, order: usize, dims: &[usize]) -> Result<(Vec<usize>, CQuat)> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != order + 4 {
        return Err(perr(
            line,
            format!("expected {} indices and 4 components, found {} fields", order, toks.len()),
        ));
    }
    let mut idx = Vec::with_capacity(order);
    for (k, tok) in toks[..order].iter().enumerate() {
        let i: usize = tok
            .parse()
            .map_err(|_| perr(line, format!("index `{tok}` is not a positive integer")))?;
        if i == 0 || i > dims[k] {
            return Err(perr(line, format!("index {i} in position {} outside 1..={}", k + 1, dims[k])));
        }
        idx.push(i - 1);
    }
    let mut comps = [0.0; 4];
    for (c, tok) in toks[order..].iter().enumerate() {
        let v: f64 = tok
            .parse()
            .map_err(|_| perr(line, format!("component `{tok}` is not a number")))?;
        if !v.is_finite() {
            return Err(perr(line, format!("component `{tok}` is not finite")));
        }
        comps[c] = v;
    }
    Ok((idx, CQuat::from_array(comps)))
}

fn write_entry(out: &mut String, idx: &[usize], q: CQuat) {
    for i in idx {
        let _ = write!(out, "{} ", i + 1);
    }
    let _ = writeln!(out, "{} {} {} {}", q.w, q.x, q.y, q.z);
}

pub fn parse_tensor(text: &str) -> Result<CQTensor> {
    let mut lines = Lines::new(text);
    let (l, magic) = lines.header(1, "header")?;
    if magic != TENSOR_MAGIC {
        return Err(perr(l, format!("expected `{TENSOR_MAGIC}`, found `{magic}`")));
    }
    let (l, t) = lines.header(l + 1, "order")?;
    let order = parse_single(l, t, "order")?;
    let (l, t) = lines.header(l + 1, "dims")?;
    let dims = parse_keyword_values(l, t, "dims")?
        .into_iter()
        .map(|tok| parse_count(l, tok, "dimension"))
        .collect::<Result<Vec<usize>>>()?;
    if dims.len() != order {
        return Err(perr(l, format!("order {order} but {} dims given", dims.len())));
    }
    let total = dims
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .filter(|&t| t <= MAX_ENTRIES)
        .ok_or_else(|| perr(l, format!("tensor larger than {MAX_ENTRIES} entries")))?;
    let mut tensor = CQTensor::zeros(&dims);
    debug_assert_eq!(tensor.len(), total);
    let mut seen = HashSet::new();
    while let Some((l, t)) = lines.next_content() {
        let (idx, q) = parse_entry(l, t, order, &dims)?;
        if !seen.insert(idx.clone()) {
            return Err(perr(l, "duplicate index"));
        }
        tensor.set(&idx, q);
    }
    Ok(tensor)
}

pub fn serialize_tensor(t: &CQTensor) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{TENSOR_MAGIC}");
    let _ = writeln!(out, "order {}", t.order());
    let dims: Vec<String> = t.dims().iter().map(usize::to_string).collect();
    let _ = writeln!(out, "dims {}", dims.join(" "));
    for (idx, q) in t.indexed() {
        if !q.is_zero() {
            write_entry(&mut out, &idx, q);
        }
    }
    out
}

pub fn parse_poly(text: &str) -> Result<PolyProblem> {
    let mut lines = Lines::new(text);
    let (l, magic) = lines.header(1, "header")?;
    if magic != POLY_MAGIC {
        return Err(perr(l, format!("expected `{POLY_MAGIC}`, found `{magic}`")));
    }
    let (l, t) = lines.header(l + 1, "degree")?;
    let degree = parse_single(l, t, "degree")?;
    let (l, t) = lines.header(l + 1, "dim")?;
    let dim = parse_single(l, t, "dim")?;
    let mut poly = PolyProblem::new(degree, dim).map_err(|e| perr(l, e.to_string()))?;
    let dims = vec![dim; degree];
    let mut seen = HashSet::new();
    while let Some((l, t)) = lines.next_content() {
        let (idx, q) = parse_entry(l, t, degree, &dims)?;
        if idx.windows(2).any(|w| w[0] > w[1]) {
            return Err(perr(l, "index tuple is not sorted nondecreasing"));
        }
        if !seen.insert(idx.clone()) {
            return Err(perr(l, "duplicate index"));
        }
        poly.add_term(&idx, q).map_err(|e| perr(l, e.to_string()))?;
    }
    Ok(poly)
}

pub fn serialize_poly(p: &PolyProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{POLY_MAGIC}");
    let _ = writeln!(out, "degree {}", p.degree());
    let _ = writeln!(out, "dim {}", p.dim());
    for (idx, q) in p.terms() {
        if !q.is_zero() {
            write_entry(&mut out, idx, q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse_err_line(r: Result<impl std::fmt::Debug>) -> usize {
        match r {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn tensor_example() {
        let text = "CQT1\norder 2\ndims 2 3\n1 1 1 0 0 0\n2 3 0.5 -1 0 2\n";
        let t = parse_tensor(text).unwrap();
        assert_eq!(t.dims(), &[2, 3]);
        assert_eq!(t.get(&[0, 0]), CQuat::ONE);
        assert_eq!(t.get(&[1, 2]), CQuat::new(0.5, -1.0, 0.0, 2.0));
        assert_eq!(t.get(&[0, 1]), CQuat::ZERO);
        assert_eq!(serialize_tensor(&t), text);
    }

    #[test]
    fn tensor_errors_name_lines() {
        assert_eq!(parse_err_line(parse_tensor("CQT2\norder 1\ndims 2\n")), 1);
        assert_eq!(parse_err_line(parse_tensor("CQT1\norder x\ndims 2\n")), 2);
        assert_eq!(parse_err_line(parse_tensor("CQT1\norder 2\ndims 2\n")), 3);
        assert_eq!(parse_err_line(parse_tensor("CQT1\norder 1\ndims 2\n1 1 0 0 0\n3 1 0 0 0\n")), 5);
        assert_eq!(parse_err_line(parse_tensor("CQT1\norder 1\ndims 2\n1 1 0 0 0\n1 2 0 0 0\n")), 5);
        assert_eq!(parse_err_line(parse_tensor("CQT1\norder 1\ndims 2\n1 1 0 0\n")), 4);
        assert_eq!(parse_err_line(parse_tensor("CQT1\norder 1\ndims 2\n0 1 0 0 0\n")), 4);
        assert_eq!(parse_err_line(parse_tensor("CQT1\norder 1\ndims 2\n1 nan 0 0 0\n")), 4);
        assert_eq!(parse_err_line(parse_tensor("CQT1\norder 1\n")), 3);
        assert_eq!(parse_err_line(parse_tensor("CQT1\norder 2\ndims 100000 100000\n")), 3);
    }

    #[test]
    fn poly_example() {
        let text = "CQP1\ndegree 3\ndim 2\n1 1 1 1 0 0 0\n1 2 2 0 0 -0.25 0\n";
        let p = parse_poly(text).unwrap();
        assert_eq!(p.coeff(&[0, 0, 0]), CQuat::ONE);
        assert_eq!(p.coeff(&[0, 1, 1]), CQuat::new(0.0, 0.0, -0.25, 0.0));
        assert_eq!(serialize_poly(&p), text);
    }

    #[test]
    fn poly_errors_name_lines() {
        assert_eq!(parse_err_line(parse_poly("CQP1\ndegree 2\ndim 2\n2 1 1 0 0 0\n")), 4);
        assert_eq!(parse_err_line(parse_poly("CQP1\ndegree 2\ndim 2\n1 2 1 0 0 0\n1 2 1 0 0 0\n")), 5);
        assert_eq!(parse_err_line(parse_poly("CQP1\ndegree 0\ndim 2\n")), 2);
        assert_eq!(parse_err_line(parse_poly("CQT1\ndegree 2\ndim 2\n")), 1);
    }

    #[test]
    fn zero_objects_serialize_to_headers() {
        let p = PolyProblem::new(3, 1).unwrap();
        assert_eq!(serialize_poly(&p), "CQP1\ndegree 3\ndim 1\n");
        assert!(parse_poly("CQP1\ndegree 3\ndim 1\n").unwrap().is_zero());
    }

    fn small_quat() -> impl Strategy<Value = CQuat> {
        prop::array::uniform4(prop_oneof![Just(0.0), -10.0..10.0f64]).prop_map(CQuat::from_array)
    }

    proptest! {
        #[test]
        fn tensor_round_trip(dims in prop::collection::vec(1usize..4, 1..4), seed in any::<u64>()) {
            let mut k = seed;
            let t = CQTensor::from_fn(&dims, |_| {
                k = k.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if k >> 62 == 0 { CQuat::ZERO } else { CQuat::new((k >> 11) as f64 / 1e15, -1.5, 0.0, 1e-7) }
            });
            let s = serialize_tensor(&t);
            let back = parse_tensor(&s).unwrap();
            prop_assert_eq!(&back, &t);
            prop_assert_eq!(serialize_tensor(&back), s);
        }

        #[test]
        fn poly_round_trip(terms in prop::collection::vec((prop::collection::vec(0usize..3, 3), small_quat()), 0..6)) {
            let mut p = PolyProblem::new(3, 3).unwrap();
            for (idx, q) in terms {
                p.add_term(&idx, q).unwrap();
            }
            let s = serialize_poly(&p);
            let back = parse_poly(&s).unwrap();
            prop_assert_eq!(serialize_poly(&back), s);
        }
    }
}
