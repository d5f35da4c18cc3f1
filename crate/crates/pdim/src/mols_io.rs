//! Latin square pairs as text: two whitespace-separated `m × m` integer
//! grids, separated by a blank line.

use pdim_core::latin::{LatinError, LatinSquare, MolsPair};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GridError {
    #[error("bad integer '{0}'")]
    BadToken(String),
    #[error("{0} numbers do not form two square grids")]
    NotTwoSquares(usize),
    #[error(transparent)]
    Invalid(#[from] LatinError),
}

pub fn format_pair(p: &MolsPair) -> String {
    let grid = |s: &LatinSquare| {
        s.rows()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    format!("{}\n\n{}\n", grid(&p.a), grid(&p.b))
}

/// Reads two grids and checks Latin-ness, orthogonality and row-meeting.
pub fn parse_pair(text: &str) -> Result<MolsPair, GridError> {
    let numbers: Vec<usize> = text
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| GridError::BadToken(t.to_string())))
        .collect::<Result<_, _>>()?;
    let half = numbers.len() / 2;
    let m = (half as f64).sqrt().round() as usize;
    if !numbers.len().is_multiple_of(2) || m * m != half || m == 0 {
        return Err(GridError::NotTwoSquares(numbers.len()));
    }
    let square =
        |cells: &[usize]| LatinSquare::from_rows(cells.chunks(m).map(<[usize]>::to_vec).collect());
    let a = square(&numbers[..half])?;
    let b = square(&numbers[half..])?;
    Ok(MolsPair::new(a, b)?)
}
