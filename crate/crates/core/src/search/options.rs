use super::SearchError;

/// Translation of the L-curve axes before the corner criterion; the
/// criterion is `(‖r‖ - residual)² + (‖x‖ - solution)²`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LCurveShift {
    pub residual: f64,
    pub solution: f64,
}

/// Knobs shared by the quantum pipelines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    /// Phase bits tried first for each branch's HHL run.
    pub n_phase_bits: usize,
    /// Upper limit when more bits are needed to resolve a branch's spectrum.
    pub max_phase_bits: usize,
    /// Odd number of register readouts per branch; their median is kept.
    pub repetitions: usize,
    /// Independent minimum searches; the best index found wins.
    pub search_restarts: usize,
    pub shift: LCurveShift,
    /// Phase bits of the singular-value sampling step.
    pub sv_bits: usize,
    /// Shots of the singular-value sampling step (default `100 r`).
    pub shots: Option<usize>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            n_phase_bits: 8,
            max_phase_bits: 12,
            repetitions: 3,
            search_restarts: 6,
            shift: LCurveShift::default(),
            sv_bits: 8,
            shots: None,
        }
    }
}

impl PipelineOptions {
    pub(crate) fn check(&self) -> Result<(), SearchError> {
        if self.repetitions.is_multiple_of(2) {
            return Err(SearchError::InvalidOption(format!(
                "repetitions must be odd, got {}",
                self.repetitions
            )));
        }
        if self.search_restarts == 0 {
            return Err(SearchError::InvalidOption(
                "at least one minimum search is needed".into(),
            ));
        }
        if self.n_phase_bits < 2 || self.max_phase_bits < self.n_phase_bits {
            return Err(SearchError::InvalidOption(format!(
                "phase bits {}..={} are not a valid range",
                self.n_phase_bits, self.max_phase_bits
            )));
        }
        Ok(())
    }
}
