use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::{
    media_template, MpdError, MpdErrorKind, MpdModel, MpdRepresentation, SrdDescriptor,
    TileAdaptationSet, SRD_SCHEME,
};
use crate::segment::SegmentId;

#[derive(Default)]
struct SetBuilder {
    line: usize,
    srd: Option<SrdDescriptor>,
    template: Option<String>,
    reps: Vec<MpdRepresentation>,
}

struct RepBuilder {
    rep_id: Option<u8>,
    width: u32,
    height: u32,
    bandwidth_bps: u64,
    template: Option<String>,
}

fn line_of(text: &str, pos: usize) -> usize {
    text.as_bytes()[..pos.min(text.len())]
        .iter()
        .filter(|&&b| b == b'\n')
        .count()
        + 1
}

fn attr(e: &BytesStart, name: &str, line: usize) -> Result<Option<String>, MpdError> {
    for a in e.attributes() {
        let a = a.map_err(|err| MpdError::new(MpdErrorKind::Xml(err.to_string()), format!("line {line}")))?;
        if a.key.local_name().as_ref() == name.as_bytes() {
            let v = a
                .unescape_value()
                .map_err(|err| MpdError::new(MpdErrorKind::Xml(err.to_string()), format!("line {line}")))?;
            return Ok(Some(v.into_owned()));
        }
    }
    Ok(None)
}

fn required<T: std::str::FromStr>(
    e: &BytesStart,
    name: &'static str,
    line: usize,
) -> Result<T, MpdError> {
    let loc = || format!("line {line}");
    let v = attr(e, name, line)?.ok_or_else(|| MpdError::new(MpdErrorKind::MissingAttribute(name), loc()))?;
    v.trim()
        .parse()
        .map_err(|_| MpdError::new(MpdErrorKind::Xml(format!("attribute {name}={v:?} is not a number")), loc()))
}

/// Parses an ISO 8601 duration of the form `P[nD]T[nH][nM][nS]` into seconds.
pub(crate) fn parse_iso_duration(s: &str) -> Option<f64> {
    let rest = s.trim().strip_prefix('P')?;
    let (date, time) = match rest.split_once('T') {
        Some((d, t)) => (d, t),
        None => (rest, ""),
    };
    let mut total = 0.0;
    let mut any = false;
    let mut take = |part: &str, units: &[(char, f64)]| -> Option<()> {
        let mut num = String::new();
        for c in part.chars() {
            if c.is_ascii_digit() || c == '.' {
                num.push(c);
                continue;
            }
            let scale = units.iter().find(|(u, _)| *u == c)?.1;
            total += num.parse::<f64>().ok()? * scale;
            num.clear();
            any = true;
        }
        num.is_empty().then_some(())
    };
    take(date, &[('D', 86_400.0)])?;
    take(time, &[('H', 3600.0), ('M', 60.0), ('S', 1.0)])?;
    any.then_some(total)
}

/// Splits an SRD `value` attribute; fields may carry surrounding whitespace.
pub(crate) fn parse_srd_value(value: &str, location: &str) -> Result<SrdDescriptor, MpdError> {
    let err = |kind| MpdError::new(kind, location);
    let fields: Vec<&str> = value.split(',').map(str::trim).collect();
    if fields.len() != 7 && fields.len() != 8 {
        return Err(err(MpdErrorKind::SrdArity(fields.len())));
    }
    let mut nums = Vec::with_capacity(8);
    for f in &fields {
        let v: u64 = f
            .parse()
            .map_err(|_| err(MpdErrorKind::SrdValue((*f).to_owned())))?;
        nums.push(v);
    }
    if nums.len() == 7 {
        return Err(err(MpdErrorKind::MissingSpatialSet));
    }
    if nums[7] > 5 {
        return Err(err(MpdErrorKind::SpatialSetRange(nums[7])));
    }
    let narrow = |i: usize| -> Result<u32, MpdError> {
        u32::try_from(nums[i]).map_err(|_| err(MpdErrorKind::SrdValue(fields[i].to_owned())))
    };
    Ok(SrdDescriptor {
        source_id: narrow(0)?,
        object_x: narrow(1)?,
        object_y: narrow(2)?,
        object_w: narrow(3)?,
        object_h: narrow(4)?,
        total_w: narrow(5)?,
        total_h: narrow(6)?,
        spatial_set_id: nums[7] as u8,
    })
}

/// Parses MPD XML back into a validated [`MpdModel`].
///
/// Elements and attributes outside the tiled-SRD profile are skipped.
pub fn parse_mpd(text: &str) -> Result<MpdModel, MpdError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);

    let mut media_duration = None;
    let mut max_seg_duration = None;
    let mut template_duration = None;
    let mut seen_mpd = false;
    let mut sets: Vec<(usize, TileAdaptationSet)> = Vec::new();
    let mut set: Option<SetBuilder> = None;
    let mut rep: Option<RepBuilder> = None;

    loop {
        let event = reader
            .read_event()
            .map_err(|e| {
                let line = line_of(text, reader.buffer_position() as usize);
                MpdError::new(MpdErrorKind::Xml(e.to_string()), format!("line {line}"))
            })?;
        let line = line_of(text, reader.buffer_position() as usize);
        let loc = format!("line {line}");
        let e = match &event {
            Event::Start(e) | Event::Empty(e) => Some(e),
            Event::Eof => break,
            _ => None,
        };

        if let Some(e) = e {
            match e.local_name().as_ref() {
                b"MPD" => {
                    seen_mpd = true;
                    media_duration = attr(e, "mediaPresentationDuration", line)?;
                    max_seg_duration = attr(e, "maxSegmentDuration", line)?;
                }
                b"AdaptationSet" => {
                    set = Some(SetBuilder { line, ..Default::default() });
                }
                b"SupplementalProperty" | b"EssentialProperty" => {
                    if let Some(s) = set.as_mut() {
                        if attr(e, "schemeIdUri", line)?.as_deref() == Some(SRD_SCHEME) {
                            let value = attr(e, "value", line)?
                                .ok_or_else(|| MpdError::new(MpdErrorKind::MissingAttribute("value"), loc.clone()))?;
                            s.srd = Some(parse_srd_value(&value, &loc)?);
                        }
                    }
                }
                b"Representation" if set.is_some() => {
                    let rep_id = match attr(e, "qualityRanking", line)? {
                        Some(q) => Some(q.trim().parse().map_err(|_| {
                            MpdError::new(
                                MpdErrorKind::RepresentationOrder(format!("qualityRanking {q:?} is not a rank")),
                                loc.clone(),
                            )
                        })?),
                        None => None,
                    };
                    rep = Some(RepBuilder {
                        rep_id,
                        width: required(e, "width", line)?,
                        height: required(e, "height", line)?,
                        bandwidth_bps: required(e, "bandwidth", line)?,
                        template: None,
                    });
                }
                b"SegmentTemplate" => {
                    let media = attr(e, "media", line)?;
                    if let Some(d) = attr(e, "duration", line)? {
                        let scale: f64 = attr(e, "timescale", line)?
                            .and_then(|t| t.parse().ok())
                            .unwrap_or(1.0);
                        if let Ok(d) = d.parse::<f64>() {
                            template_duration.get_or_insert(d / scale);
                        }
                    }
                    if let Some(r) = rep.as_mut() {
                        r.template = media;
                    } else if let Some(s) = set.as_mut() {
                        s.template = media;
                    }
                }
                _ => {}
            }
        }

        let closing = match &event {
            Event::End(e) => Some(e.local_name().as_ref().to_vec()),
            Event::Empty(e) => Some(e.local_name().as_ref().to_vec()),
            _ => None,
        };
        match closing.as_deref() {
            Some(b"Representation") => {
                if let (Some(r), Some(s)) = (rep.take(), set.as_mut()) {
                    let rep_id = r.rep_id.unwrap_or(s.reps.len() as u8 + 1);
                    s.reps.push(MpdRepresentation {
                        rep_id,
                        width: r.width,
                        height: r.height,
                        bandwidth_bps: r.bandwidth_bps,
                        media_template: String::new(),
                    });
                    let last = s.reps.last_mut().expect("just pushed");
                    last.media_template = r.template.unwrap_or_default();
                }
            }
            Some(b"AdaptationSet") => {
                if let Some(s) = set.take() {
                    let srd = s
                        .srd
                        .ok_or_else(|| MpdError::new(MpdErrorKind::MissingSrd, format!("line {}", s.line)))?;
                    if sets.iter().any(|(_, a)| a.srd.spatial_set_id == srd.spatial_set_id) {
                        return Err(MpdError::new(
                            MpdErrorKind::DuplicateSpatialSet(srd.spatial_set_id),
                            format!("line {}", s.line),
                        ));
                    }
                    let segment = SegmentId::from_index(srd.spatial_set_id as usize).expect("range checked");
                    let representations = s
                        .reps
                        .into_iter()
                        .map(|mut r| {
                            if r.media_template.is_empty() {
                                r.media_template = s
                                    .template
                                    .clone()
                                    .unwrap_or_else(|| media_template(segment, r.rep_id));
                            }
                            r
                        })
                        .collect();
                    sets.push((s.line, TileAdaptationSet { srd, representations }));
                }
            }
            _ => {}
        }
    }

    if !seen_mpd {
        return Err(MpdError::new(MpdErrorKind::Xml("no MPD root element".into()), "line 1"));
    }
    let media_duration_s = media_duration
        .ok_or_else(|| MpdError::new(MpdErrorKind::MissingAttribute("mediaPresentationDuration"), "MPD"))
        .and_then(|d| {
            parse_iso_duration(&d).ok_or_else(|| {
                MpdError::new(MpdErrorKind::Duration(format!("bad duration {d:?}")), "MPD")
            })
        })?;
    let segment_duration_s = match max_seg_duration {
        Some(d) => parse_iso_duration(&d).ok_or_else(|| {
            MpdError::new(MpdErrorKind::Duration(format!("bad duration {d:?}")), "MPD")
        })?,
        None => template_duration
            .ok_or_else(|| MpdError::new(MpdErrorKind::MissingAttribute("maxSegmentDuration"), "MPD"))?,
    };

    sets.sort_by_key(|(_, a)| a.srd.spatial_set_id);
    let lines: Vec<usize> = sets.iter().map(|(l, _)| *l).collect();
    let model = MpdModel {
        media_duration_s,
        segment_duration_s,
        adaptation_sets: sets.into_iter().map(|(_, a)| a).collect(),
    };
    model.validate_located(|i| format!("AdaptationSet at line {}", lines[i]))?;
    Ok(model)
}
