use crate::error::{Error, Result};
use std::ops::Range;

/// Contiguous K-fold partition of snapshot indices `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    segments: Vec<Range<usize>>,
}

/// Splits `0..m` into `k` contiguous segments; the first `m mod k` have
/// `⌈m/k⌉` members and the rest `⌊m/k⌋`.
pub fn kfold(m: usize, k: usize) -> Result<FoldPlan> {
    if k < 2 || k > m {
        return Err(Error::Fold { k, m });
    }
    let (base, extra) = (m / k, m % k);
    let mut start = 0;
    let segments = (0..k)
        .map(|j| {
            let len = base + usize::from(j < extra);
            let seg = start..start + len;
            start += len;
            seg
        })
        .collect();
    Ok(FoldPlan { segments })
}

impl FoldPlan {
    pub fn k(&self) -> usize {
        self.segments.len()
    }

    pub fn segments(&self) -> &[Range<usize>] {
        &self.segments
    }

    pub fn test(&self, fold: usize) -> Range<usize> {
        self.segments[fold].clone()
    }

    /// All indices outside the test segment, ascending.
    pub fn train(&self, fold: usize) -> Vec<usize> {
        let test = &self.segments[fold];
        let m = self.segments.last().map_or(0, |s| s.end);
        (0..m).filter(|i| !test.contains(i)).collect()
    }
}
