//! Encoding JSON: `{"n": int, "l": int, "codes": [[int, ...], ...]}` with
//! row `i` holding the code of vertex `i`.

use pdim_core::encoding::EncodingError;
use pdim_core::{Encoding, Symbol};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EncodingJson {
    n: usize,
    l: usize,
    codes: Vec<Vec<Symbol>>,
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed encoding JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("declared n = {declared} but {found} codes given")]
    CountMismatch { declared: usize, found: usize },
    #[error("vertices must be 0..n to be written as JSON")]
    NonContiguousVertices,
    #[error(transparent)]
    Encoding(#[from] EncodingError),
}

/// Compact single-line JSON followed by a newline.
pub fn encoding_to_json(e: &Encoding) -> Result<String, JsonError> {
    let contiguous = e
        .vertices()
        .iter()
        .enumerate()
        .all(|(i, &v)| v as usize == i);
    if !contiguous {
        return Err(JsonError::NonContiguousVertices);
    }
    let doc = EncodingJson {
        n: e.vertex_count(),
        l: e.dimension(),
        codes: e.codes().map(|(_, c)| c.to_vec()).collect(),
    };
    let mut s = serde_json::to_string(&doc)?;
    s.push('\n');
    Ok(s)
}

pub fn encoding_from_json(text: &str) -> Result<Encoding, JsonError> {
    let doc: EncodingJson = serde_json::from_str(text)?;
    if doc.codes.len() != doc.n {
        return Err(JsonError::CountMismatch {
            declared: doc.n,
            found: doc.codes.len(),
        });
    }
    Ok(Encoding::from_codes(doc.l, doc.codes)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let text = "{\"n\":3,\"l\":2,\"codes\":[[0,0],[1,1],[0,2]]}\n";
        let e = encoding_from_json(text).unwrap();
        assert_eq!(e.code(2), &[0, 2]);
        assert_eq!(encoding_to_json(&e).unwrap(), text);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(
            encoding_from_json("{\"n\":2,\"l\":1,\"codes\":[[0]]}"),
            Err(JsonError::CountMismatch {
                declared: 2,
                found: 1
            })
        ));
        assert!(matches!(
            encoding_from_json("{\"n\":2,\"l\":2,\"codes\":[[0],[1]]}"),
            Err(JsonError::Encoding(_))
        ));
        assert!(matches!(
            encoding_from_json("{\"n\":1"),
            Err(JsonError::Syntax(_))
        ));
        assert!(matches!(
            encoding_from_json("{\"n\":0,\"l\":1,\"codes\":[],\"extra\":1}"),
            Err(JsonError::Syntax(_))
        ));
    }
}
