//! The graph6 interchange format.
//!
//! A size field followed by the upper triangle of the adjacency matrix in
//! column-major order (`x(0,1), x(0,2), x(1,2), x(0,3), ...`), six bits per
//! byte, each byte offset by 63. Decoding is strict: the size field must use
//! its shortest form and the padding bits must be zero, so decoding and
//! re-encoding always reproduces the input.

use thiserror::Error;

use crate::graph::Graph;

/// Largest vertex count accepted by the decoder.
pub const MAX_VERTICES: usize = 1 << 18;

const HEADER: &[u8] = b">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed graph6: {0}")]
pub struct MalformedGraph6(pub String);

fn malformed<T>(msg: impl Into<String>) -> Result<T, MalformedGraph6> {
    Err(MalformedGraph6(msg.into()))
}

fn encode_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
}

pub fn encode(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(8 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    encode_size(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
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
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

fn sextet(b: u8) -> Result<u8, MalformedGraph6> {
    if (63..=126).contains(&b) {
        Ok(b - 63)
    } else {
        malformed(format!(
            "byte 0x{b:02x} outside the printable range 63..=126"
        ))
    }
}

fn decode_size(data: &[u8]) -> Result<(usize, &[u8]), MalformedGraph6> {
    let read = |bytes: &[u8]| -> Result<usize, MalformedGraph6> {
        bytes
            .iter()
            .try_fold(0usize, |acc, &b| Ok(acc << 6 | sextet(b)? as usize))
    };
    match data {
        [] => malformed("empty input"),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return malformed("truncated 8-byte size field");
            }
            let n = read(&rest[..6])?;
            if n <= 258_047 {
                return malformed(format!("size {n} not in its shortest form"));
            }
            Ok((n, &rest[6..]))
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return malformed("truncated 4-byte size field");
            }
            let n = read(&rest[..3])?;
            if n <= 62 {
                return malformed(format!("size {n} not in its shortest form"));
            }
            Ok((n, &rest[3..]))
        }
        [b, rest @ ..] => Ok((sextet(*b)? as usize, rest)),
    }
}

/// Decodes one graph6 record. An optional `>>graph6<<` header and a trailing
/// line terminator are accepted.
pub fn decode(data: &[u8]) -> Result<Graph, MalformedGraph6> {
    let data = data.strip_prefix(HEADER).unwrap_or(data);
    let data = data.strip_suffix(b"\n").unwrap_or(data);
    let data = data.strip_suffix(b"\r").unwrap_or(data);
    let (n, body) = decode_size(data)?;
    if n > MAX_VERTICES {
        return malformed(format!("{n} vertices exceeds the limit of {MAX_VERTICES}"));
    }
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return malformed(format!(
            "{n} vertices need {expected} body bytes, found {}",
            body.len()
        ));
    }
    let mut edges = Vec::new();
    let (mut i, mut j) = (0usize, 1usize);
    for (k, &b) in body.iter().enumerate() {
        let s = sextet(b)?;
        for bit in (0..6).rev() {
            let index = k * 6 + (5 - bit);
            let set = s >> bit & 1 == 1;
            if index >= bits {
                if set {
                    return malformed("nonzero padding bits");
                }
                continue;
            }
            if set {
                edges.push((i, j));
            }
            i += 1;
            if i == j {
                i = 0;
                j += 1;
            }
        }
    }
    Ok(Graph::from_edges(n, edges).expect("upper-triangle bits give a simple graph"))
}

/// Decodes every non-empty line of a graph6 file.
pub fn decode_all(text: &[u8]) -> Result<Vec<Graph>, MalformedGraph6> {
    text.split(|&b| b == b'\n')
        .map(|line| line.strip_suffix(b"\r").unwrap_or(line))
        .filter(|line| !line.is_empty())
        .map(decode)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct transcription of the format description: build the bit string,
    /// pad it to a multiple of six, then map each group to a byte.
    fn reference_encode(n: usize, edges: &[(usize, usize)]) -> String {
        let adj = |i: usize, j: usize| edges.contains(&(i, j)) || edges.contains(&(j, i));
        let mut bits = Vec::new();
        for j in 0..n {
            for i in 0..j {
                bits.push(adj(i, j));
            }
        }
        while bits.len() % 6 != 0 {
            bits.push(false);
        }
        let mut s = String::new();
        assert!(n <= 62);
        s.push((n as u8 + 63) as char);
        for chunk in bits.chunks(6) {
            let v = chunk.iter().fold(0u8, |acc, &b| acc * 2 + b as u8);
            s.push((v + 63) as char);
        }
        s
    }

    #[test]
    fn known_encodings() {
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(
            reference_encode(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
            "C~"
        );
        assert_eq!(encode(&k4), "C~");
        assert_eq!(reference_encode(1, &[]), "@");
        assert_eq!(encode(&Graph::empty(1)), "@");
        assert_eq!(encode(&Graph::empty(0)), "?");
        let e = [(0, 2), (0, 4), (1, 3), (3, 4)];
        let g = Graph::from_edges(5, e).unwrap();
        assert_eq!(encode(&g), "DQc");
        assert_eq!(encode(&g), reference_encode(5, &e));
    }

    #[test]
    fn long_size_fields() {
        let g = Graph::from_edges(63, [(0, 62)]).unwrap();
        let s = encode(&g);
        assert_eq!(&s.as_bytes()[..4], &[126, 63, 63, 126]);
        assert_eq!(decode(s.as_bytes()).unwrap(), g);

        let mut head = Vec::new();
        encode_size(258_048, &mut head);
        assert_eq!(head.len(), 8);
        assert_eq!(decode_size(&head).unwrap().0, 258_048);
    }

    #[test]
    fn header_and_newline() {
        let g = decode(b">>graph6<<C~\n").unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(decode(b"C~\r\n").unwrap(), g);
        assert_eq!(decode_all(b"C~\n@\n\nA_\n").unwrap().len(), 3);
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            &b""[..],
            b"C",
            b"C~~",
            b"C\x20",
            b"A`",         // padding bit set
            b"~??@",       // 1 vertex in the long form
            b"~~????????", // zero in the 8-byte form
            b"~?",
            b"\xff",
        ] {
            assert!(decode(bad).is_err(), "{bad:?}");
        }
        // over the vertex limit
        let mut head = Vec::new();
        encode_size(MAX_VERTICES + 1, &mut head);
        assert!(decode(&head).is_err());
    }
}
