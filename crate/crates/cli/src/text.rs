//! Text forms used on the command line: the compact run-length state
//! format, angle specifications, and evolution schedules.
//!
//! A compact state is a dot-joined list of segments, each a word over
//! {1, 2} optionally raised to a repeat count: `1122111111222222.1^154`
//! expands to the 170-box state with that prefix followed by 154 empty
//! boxes.

use pbbs_core::crystal::{Letter, State};
use pbbs_core::error::Error;
use pbbs_core::scattering::ActionAngle;
use pbbs_core::theta::Evolution;

/// Expands compact text into a state. Errors carry the byte position.
pub fn parse_state(text: &str) -> Result<State, Error> {
    let mut letters = Vec::new();
    let mut offset = 0usize;
    for segment in text.split('.') {
        if segment.is_empty() {
            return Err(Error::Parse { position: offset, message: "empty segment".into() });
        }
        let (word, count) = match segment.split_once('^') {
            None => (segment, 1usize),
            Some((word, count_text)) => {
                let count = count_text.parse::<usize>().map_err(|_| Error::Parse {
                    position: offset + word.len() + 1,
                    message: format!("bad repeat count {count_text:?}"),
                })?;
                if count == 0 {
                    return Err(Error::Parse {
                        position: offset + word.len() + 1,
                        message: "repeat count must be positive".into(),
                    });
                }
                (word, count)
            }
        };
        if word.is_empty() {
            return Err(Error::Parse {
                position: offset,
                message: "segment has no letters".into(),
            });
        }
        let mut expanded = Vec::with_capacity(word.len());
        for (i, c) in word.char_indices() {
            expanded.push(Letter::from_char(c).map_err(|_| Error::Parse {
                position: offset + i,
                message: format!("invalid letter {c:?}"),
            })?);
        }
        for _ in 0..count {
            letters.extend_from_slice(&expanded);
        }
        offset += segment.len() + 1;
    }
    State::new(letters)
}

/// Renders a state compactly: maximal single-letter runs longer than 8
/// become `c^n` segments, everything else stays plain.
pub fn format_state(state: &State) -> String {
    let mut segments: Vec<String> = Vec::new();
    let mut plain = String::new();
    let letters = state.letters();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        let run = j - i;
        if run > 8 {
            if !plain.is_empty() {
                segments.push(std::mem::take(&mut plain));
            }
            segments.push(format!("{}^{}", letters[i].as_char(), run));
        } else {
            for _ in 0..run {
                plain.push(letters[i].as_char());
            }
        }
        i = j;
    }
    if !plain.is_empty() {
        segments.push(plain);
    }
    segments.join(".")
}

/// Parses `mu=2,6;L=170;I=0,0` into action-angle data.
pub fn parse_angle(text: &str) -> Result<ActionAngle, Error> {
    let mut parts: Option<Vec<u32>> = None;
    let mut system_size: Option<usize> = None;
    let mut angle: Option<Vec<i128>> = None;
    let mut offset = 0usize;
    for field in text.split(';') {
        let position = offset;
        offset += field.len() + 1;
        let (key, value) = field.split_once('=').ok_or_else(|| Error::Parse {
            position,
            message: format!("expected key=value, got {field:?}"),
        })?;
        fn items(v: &str) -> Vec<&str> {
            v.split(',').filter(|t| !t.trim().is_empty()).collect()
        }
        match key.trim() {
            "mu" => {
                parts = Some(
                    items(value)
                        .iter()
                        .map(|t| t.trim().parse::<u32>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| Error::Parse {
                            position,
                            message: format!("bad mu: {e}"),
                        })?,
                );
            }
            "L" => {
                system_size =
                    Some(value.trim().parse::<usize>().map_err(|e| Error::Parse {
                        position,
                        message: format!("bad L: {e}"),
                    })?);
            }
            "I" => {
                angle = Some(
                    items(value)
                        .iter()
                        .map(|t| t.trim().parse::<i128>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| Error::Parse {
                            position,
                            message: format!("bad I: {e}"),
                        })?,
                );
            }
            other => {
                return Err(Error::Parse {
                    position,
                    message: format!("unknown field {other:?}; expected mu, L, I"),
                })
            }
        }
    }
    let system_size = system_size.ok_or(Error::Parse {
        position: 0,
        message: "missing field L".into(),
    })?;
    ActionAngle::new(
        parts.unwrap_or_default(),
        system_size,
        angle.unwrap_or_default(),
    )
}

/// Parses a schedule `l:t,l:t,...` where `l` is a positive integer or
/// `inf`. The empty string is the empty schedule.
pub fn parse_schedule(text: &str) -> Result<Vec<(Evolution, i64)>, Error> {
    let mut schedule = Vec::new();
    let mut offset = 0usize;
    for item in text.split(',') {
        let position = offset;
        offset += item.len() + 1;
        if item.trim().is_empty() {
            continue;
        }
        let (l, t) = item.split_once(':').ok_or_else(|| Error::Parse {
            position,
            message: format!("expected l:t, got {item:?}"),
        })?;
        let l: Evolution = l.trim().parse().map_err(|_| Error::Parse {
            position,
            message: format!("bad evolution index {l:?}"),
        })?;
        let t: i64 = t.trim().parse().map_err(|e| Error::Parse {
            position,
            message: format!("bad time {t:?}: {e}"),
        })?;
        schedule.push((l, t));
    }
    Ok(schedule)
}
