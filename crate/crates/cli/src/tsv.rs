//! Time-tag text format: one `<timestamp_ps>\t<channel>` event per line,
//! `#` lines are comments. Timestamps must not decrease.

use std::fmt::Write as _;
use std::io::BufRead;

use photon_certify_core::{Channel, TimeTagEvent};

use crate::error::{CliError, CliResult};

pub const HEADER: &str = "# timestamp_ps\tchannel";

fn line_error(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("line {line}: {msg}"))
}

fn parse_line(text: &str, line: usize) -> CliResult<TimeTagEvent> {
    let mut fields = text.split('\t');
    let (Some(ts), Some(ch), None) = (fields.next(), fields.next(), fields.next()) else {
        return Err(line_error(
            line,
            format!("expected `<timestamp_ps>\\t<channel>`, got {text:?}"),
        ));
    };
    let timestamp_ps: u64 = ts
        .trim()
        .parse()
        .map_err(|_| line_error(line, format!("bad timestamp {ts:?}")))?;
    let code: u8 = ch
        .trim()
        .parse()
        .map_err(|_| line_error(line, format!("bad channel {ch:?}")))?;
    let channel = Channel::try_from(code)
        .map_err(|c| line_error(line, format!("unknown channel {c} (expected 0, 1 or 2)")))?;
    Ok(TimeTagEvent::new(timestamp_ps, channel))
}

pub fn parse_timetags<R: BufRead>(reader: R) -> CliResult<Vec<TimeTagEvent>> {
    let mut events: Vec<TimeTagEvent> = Vec::new();
    for (index, text) in reader.lines().enumerate() {
        let line = index + 1;
        let text = text.map_err(|e| line_error(line, e))?;
        let text = text.strip_suffix('\r').unwrap_or(&text);
        if text.starts_with('#') || text.trim().is_empty() {
            continue;
        }
        let event = parse_line(text, line)?;
        if let Some(prev) = events.last() {
            if event.timestamp_ps < prev.timestamp_ps {
                return Err(line_error(
                    line,
                    format!(
                        "timestamp {} precedes {}",
                        event.timestamp_ps, prev.timestamp_ps
                    ),
                ));
            }
        }
        events.push(event);
    }
    Ok(events)
}

pub fn parse_timetags_str(text: &str) -> CliResult<Vec<TimeTagEvent>> {
    parse_timetags(text.as_bytes())
}

/// Inverse of [`parse_timetags`] for sorted events, with a header line.
pub fn write_timetags(events: &[TimeTagEvent]) -> String {
    let mut out = String::with_capacity(16 * events.len() + HEADER.len() + 1);
    out.push_str(HEADER);
    out.push('\n');
    for e in events {
        writeln!(out, "{}\t{}", e.timestamp_ps, e.channel as u8).expect("write to String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let events = parse_timetags_str("1000\t0\n1500\t1\n").unwrap();
        assert_eq!(
            events,
            vec![
                TimeTagEvent::new(1000, Channel::Herald),
                TimeTagEvent::new(1500, Channel::Reflected)
            ]
        );
        assert!(parse_timetags_str("").unwrap().is_empty());
        let err = parse_timetags_str("abc\t0").unwrap_err();
        assert!(err.to_string().starts_with("line 1:"), "{err}");
    }

    #[test]
    fn comments_and_line_numbers() {
        let text = "# header\n5\t0\n# more\n7\t2\n6\t1\n";
        let err = parse_timetags_str(text).unwrap_err();
        assert!(err.to_string().starts_with("line 5:"), "{err}");
        let err = parse_timetags_str("1\t0\n2\t3\n").unwrap_err();
        assert!(
            err.to_string().contains("line 2: unknown channel 3"),
            "{err}"
        );
        assert!(parse_timetags_str("1\t0\t9\n").is_err());
        assert!(parse_timetags_str("1 0\n").is_err());
        assert!(parse_timetags_str("-1\t0\n").is_err());
        assert_eq!(parse_timetags_str("1\t0\r\n1\t2\r\n").unwrap().len(), 2);
    }

    #[test]
    fn write_then_parse() {
        let events = vec![
            TimeTagEvent::new(0, Channel::Herald),
            TimeTagEvent::new(0, Channel::Transmitted),
            TimeTagEvent::new(u64::MAX, Channel::Reflected),
        ];
        assert_eq!(
            parse_timetags_str(&write_timetags(&events)).unwrap(),
            events
        );
    }
}
