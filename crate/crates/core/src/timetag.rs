//! Turns time-tagged detector events into per-herald click outcomes.
//!
//! Every accepted herald opens one trial. The reflected (transmitted) arm
//! clicks in that trial if any of its events falls inside the window centred
//! on `herald + delay_R` (`herald + delay_T`). Accidentals are not subtracted:
//! the bounds must see the raw statistics.

use alloc::vec::Vec;

use crate::detection::ClickCounts;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Channel {
    Herald = 0,
    Reflected = 1,
    Transmitted = 2,
}

impl TryFrom<u8> for Channel {
    type Error = u8;

    fn try_from(value: u8) -> core::result::Result<Self, u8> {
        match value {
            0 => Ok(Channel::Herald),
            1 => Ok(Channel::Reflected),
            2 => Ok(Channel::Transmitted),
            other => Err(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeTagEvent {
    pub timestamp_ps: u64,
    pub channel: Channel,
}

impl TimeTagEvent {
    pub fn new(timestamp_ps: u64, channel: Channel) -> Self {
        Self {
            timestamp_ps,
            channel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IngestConfig {
    /// Full width of each coincidence window.
    pub window_ps: u64,
    pub delay_r_ps: i64,
    pub delay_t_ps: i64,
    /// Heralds closer than this to the previous accepted herald are skipped.
    pub dead_ps: u64,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            window_ps: 1000,
            delay_r_ps: 0,
            delay_t_ps: 0,
            dead_ps: 0,
        }
    }
}

/// Sorted arm timestamps, doubled so half-window edges stay integral.
struct Arm(Vec<i128>);

impl Arm {
    fn collect(events: &[TimeTagEvent], channel: Channel) -> Self {
        let mut stamps: Vec<i128> = events
            .iter()
            .filter(|e| e.channel == channel)
            .map(|e| 2 * i128::from(e.timestamp_ps))
            .collect();
        stamps.sort_unstable();
        Arm(stamps)
    }

    /// Any event in `[centre − window/2, centre + window/2]`?
    fn hit(&self, herald: u64, delay: i64, window: u64) -> bool {
        let centre = 2 * (i128::from(herald) + i128::from(delay));
        let (lo, hi) = (centre - i128::from(window), centre + i128::from(window));
        let first = self.0.partition_point(|&t| t < lo);
        self.0.get(first).is_some_and(|&t| t <= hi)
    }
}

/// Tallies one trial per accepted herald.
pub fn bin_trials(events: &[TimeTagEvent], config: &IngestConfig) -> Result<ClickCounts> {
    if config.window_ps == 0 {
        return Err(Error::domain("window_ps", 0.0, "window_ps > 0"));
    }
    let reflected = Arm::collect(events, Channel::Reflected);
    let transmitted = Arm::collect(events, Channel::Transmitted);

    let mut heralds: Vec<u64> = events
        .iter()
        .filter(|e| e.channel == Channel::Herald)
        .map(|e| e.timestamp_ps)
        .collect();
    heralds.sort_unstable();

    let mut counts = ClickCounts::default();
    let mut last_accepted: Option<u64> = None;
    for herald in heralds {
        if let Some(last) = last_accepted {
            if herald - last < config.dead_ps {
                continue;
            }
        }
        last_accepted = Some(herald);
        counts.record(
            reflected.hit(herald, config.delay_r_ps, config.window_ps),
            transmitted.hit(herald, config.delay_t_ps, config.window_ps),
        );
    }
    if counts.n() == 0 {
        return Err(Error::NoHeralds);
    }
    Ok(counts)
}
