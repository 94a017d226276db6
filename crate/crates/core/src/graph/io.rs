//! graph6 and edgelist text formats.
//!
//! graph6: a size header `N(n)` followed by the upper triangle of the
//! adjacency matrix in column order (`x(0,1) x(0,2) x(1,2) x(0,3) ...`),
//! packed six bits per byte, most significant bit first, each byte offset
//! by 63. `n <= 62` uses one header byte; `63 <= n <= 258047` uses `~`
//! followed by three bytes of 18 bits.
//!
//! edgelist: a first line `n m` and then `m` lines `u v`, zero-based.

use super::{Graph, MAX_VERTICES};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Graph6,
    Edgelist,
    /// graph6 first, then edgelist.
    Auto,
}

const SHORT_LIMIT: usize = 62;
const LONG_LIMIT: usize = 258_047;

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

pub fn load_graph(text: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::Graph6 => decode_graph6(text),
        GraphFormat::Edgelist => decode_edgelist(text),
        GraphFormat::Auto => decode_graph6(text).or_else(|g6_err| {
            // Edgelists consist of digits and whitespace, which never occur in graph6.
            let looks_like_edgelist = text.trim().bytes().any(|b| b.is_ascii_digit() || b == b' ');
            decode_edgelist(text).map_err(|el_err| if looks_like_edgelist { el_err } else { g6_err })
        }),
    }
}

pub fn serialize_graph(g: &Graph, format: GraphFormat) -> Result<String> {
    match format {
        GraphFormat::Graph6 | GraphFormat::Auto => encode_graph6(g),
        GraphFormat::Edgelist => Ok(encode_edgelist(g)),
    }
}

fn decode_graph6(text: &str) -> Result<Graph> {
    let line = text.trim_end_matches(['\n', '\r']);
    let bytes = line.as_bytes();
    if line.starts_with(">>graph6<<") {
        return Err(parse_err(0, "graph6 header lines are not accepted; strip '>>graph6<<'"));
    }
    if let Some(&first) = bytes.first() {
        if first == b':' || first == b'&' {
            return Err(parse_err(0, "sparse6/digraph6 input is not graph6"));
        }
    }
    if let Some(pos) = bytes.iter().position(|&b| !(63..=126).contains(&b)) {
        return Err(parse_err(
            pos,
            format!("byte {:#04x} outside the graph6 range 63..=126", bytes[pos]),
        ));
    }
    let (n, header_len) = match bytes {
        [] => return Err(parse_err(0, "empty graph6 string")),
        [126, 126, ..] => return Err(parse_err(0, "8-byte graph6 size form is not supported")),
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(parse_err(bytes.len(), "truncated long-form size header"));
            }
            let n = rest[..3].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            if n <= SHORT_LIMIT {
                return Err(parse_err(1, format!("long-form size header used for n = {n}")));
            }
            (n, 4)
        }
        [b, ..] => ((b - 63) as usize, 1),
    };
    if n > MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count",
            size: n,
            limit: MAX_VERTICES,
        });
    }
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    let data = &bytes[header_len..];
    if data.len() != expected {
        return Err(parse_err(
            header_len + data.len().min(expected),
            format!("expected {expected} data bytes for n = {n}, found {}", data.len()),
        ));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.set_edge(i, j);
            }
            k += 1;
        }
    }
    if bits % 6 != 0 {
        let last = data[expected - 1] - 63;
        let pad = 6 - bits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(parse_err(header_len + expected - 1, "nonzero padding bits"));
        }
    }
    Ok(g)
}

fn encode_graph6(g: &Graph) -> Result<String> {
    let n = g.n();
    let mut out = Vec::new();
    if n <= SHORT_LIMIT {
        out.push(n as u8 + 63);
    } else if n <= LONG_LIMIT {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        return Err(Error::TooLarge {
            what: "graph6 vertex count",
            size: n,
            limit: LONG_LIMIT,
        });
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

fn decode_edgelist(text: &str) -> Result<Graph> {
    // Offsets are byte positions of the offending token.
    let mut lines = Vec::new();
    let mut pos = 0;
    for line in text.split_inclusive('\n') {
        let content = line.trim();
        if !content.is_empty() {
            let mut toks = Vec::new();
            let mut search = 0;
            for tok in content.split_whitespace() {
                let rel = line[search..].find(tok).expect("token present") + search;
                toks.push((pos + rel, tok));
                search = rel + tok.len();
            }
            lines.push(toks);
        }
        pos += line.len();
    }
    let parse_num = |(offset, tok): (usize, &str)| -> Result<usize> {
        tok.parse::<usize>()
            .map_err(|_| parse_err(offset, format!("expected a non-negative integer, found {tok:?}")))
    };
    let mut rows = lines.into_iter();
    let header = rows.next().ok_or_else(|| parse_err(0, "empty edgelist"))?;
    if header.len() != 2 {
        return Err(parse_err(header.first().map_or(0, |t| t.0), "header must be \"n m\""));
    }
    let n = parse_num(header[0])?;
    let m = parse_num(header[1])?;
    if n > MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count",
            size: n,
            limit: MAX_VERTICES,
        });
    }
    let mut g = Graph::empty(n);
    let mut count = 0;
    for row in rows {
        if row.len() != 2 {
            return Err(parse_err(row[0].0, "edge line must be \"u v\""));
        }
        let (u, v) = (parse_num(row[0])?, parse_num(row[1])?);
        for (&w, tok) in [(&u, row[0]), (&v, row[1])] {
            if w >= n {
                return Err(parse_err(tok.0, format!("vertex {w} out of range for n = {n}")));
            }
        }
        if u == v {
            return Err(Error::Loop(u));
        }
        if g.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
        }
        g.set_edge(u, v);
        count += 1;
    }
    if count != m {
        return Err(parse_err(pos, format!("header announces {m} edges, found {count}")));
    }
    Ok(g)
}

fn encode_edgelist(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
