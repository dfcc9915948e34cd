//! graph6 interchange format: 63-offset byte encoding of n followed by the
//! upper-triangle bit vector, columns ordered by increasing column index.

use crate::graph::Graph;

/// Parse one graph6 line.
pub fn parse_graph6(line: &str) -> Result<Graph, String> {
    let bytes = line.trim().as_bytes();
    if bytes.is_empty() {
        return Err("empty graph6 line".into());
    }
    let pos;
    let n: usize = if bytes[0] == b'~' {
        if bytes.len() >= 4 && bytes[1] != b'~' {
            let mut n = 0usize;
            for &b in &bytes[1..4] {
                if !(63..127).contains(&b) {
                    return Err(format!("bad graph6 byte {b}"));
                }
                n = (n << 6) | (b as usize - 63);
            }
            pos = 4;
            n
        } else {
            return Err("graph6 sizes above 2^18 are not supported".into());
        }
    } else {
        if !(63..127).contains(&bytes[0]) {
            return Err(format!("bad graph6 byte {}", bytes[0]));
        }
        pos = 1;
        (bytes[0] - 63) as usize
    };
    if n > 1 << 16 {
        return Err(format!("graph6 order {n} exceeds the supported 2^16"));
    }

    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() - pos != nbytes {
        return Err(format!(
            "graph6 body length {} does not match order {n} (want {nbytes})",
            bytes.len() - pos
        ));
    }
    let mut bits = Vec::with_capacity(nbits);
    for &b in &bytes[pos..] {
        if !(63..127).contains(&b) {
            return Err(format!("bad graph6 byte {b}"));
        }
        let v = b - 63;
        for k in (0..6).rev() {
            bits.push((v >> k) & 1 == 1);
        }
    }

    let mut edges = Vec::new();
    let mut idx = 0;
    for col in 1..n {
        for row in 0..col {
            if bits[idx] {
                edges.push((row, col));
            }
            idx += 1;
        }
    }
    Graph::from_edge_list(n, &edges).map_err(|e| e.to_string())
}

/// Encode a graph as one graph6 line.
pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(b'~');
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for col in 1..n {
        for row in 0..col {
            bits.push(g.has_edge(row, col));
        }
    }
    while bits.len() % 6 != 0 {
        bits.push(false);
    }
    for chunk in bits.chunks(6) {
        let mut v = 0u8;
        for (k, &b) in chunk.iter().enumerate() {
            if b {
                v |= 1 << (5 - k);
            }
        }
        out.push(v + 63);
    }
    String::from_utf8(out).unwrap()
}

/// Heuristic used by the CLI: a line is treated as graph6 when its first
/// byte is a plausible header byte and it contains no whitespace-separated
/// decimal pair.
pub fn looks_like_graph6(line: &str) -> bool {
    let t = line.trim();
    !t.is_empty()
        && t.bytes().all(|b| (63..127).contains(&b))
        && t.parse::<usize>().is_err()
}
