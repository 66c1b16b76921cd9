//! `hour,demand,arrivals,price` CSV for event profiles.

use rust_decimal::Decimal;

use crate::error::IngestError;
use crate::model::EventProfiles;

const HEADER: [&str; 4] = ["hour", "demand", "arrivals", "price"];

/// Reads profiles for hours 1..=horizon. Rows must list every hour once, in
/// order. Prices are kept as exact decimals.
pub fn load_profiles(text: &str, horizon: usize) -> Result<EventProfiles, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(IngestError::Header(
            header.iter().collect::<Vec<_>>().join(","),
        ));
    }

    let mut events = EventProfiles {
        demand: Vec::with_capacity(horizon),
        arrivals: Vec::with_capacity(horizon),
        price: Vec::with_capacity(horizon),
    };
    for record in reader.records() {
        let record = record?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let err = |message: String| IngestError::Row { row, message };
        if record.len() != 4 {
            return Err(err(format!("expected 4 fields, found {}", record.len())));
        }
        let hour: usize = record[0]
            .parse()
            .map_err(|_| err(format!("bad hour `{}`", &record[0])))?;
        let expected = events.demand.len() + 1;
        if hour > horizon {
            return Err(err(format!("hour {hour} is beyond the horizon {horizon}")));
        }
        if hour > expected {
            return Err(IngestError::MissingHour(expected));
        }
        if hour < expected {
            return Err(err(format!("hour {hour} repeated or out of order")));
        }
        let count = |idx: usize, name: &str| -> Result<u32, IngestError> {
            let value: i64 = record[idx]
                .parse()
                .map_err(|_| err(format!("bad {name} `{}`", &record[idx])))?;
            u32::try_from(value)
                .map_err(|_| err(format!("{name} must be a non-negative count, got {value}")))
        };
        let demand = count(1, "demand")?;
        let arrivals = count(2, "arrivals")?;
        let price: Decimal = record[3]
            .parse()
            .map_err(|_| err(format!("bad price `{}`", &record[3])))?;
        if price.is_sign_negative() && !price.is_zero() {
            return Err(err(format!("negative price {price}")));
        }
        events.demand.push(demand);
        events.arrivals.push(arrivals);
        events.price.push(price);
    }
    if events.demand.len() < horizon {
        return Err(IngestError::MissingHour(events.demand.len() + 1));
    }
    Ok(events)
}

pub fn write_profiles(events: &EventProfiles) -> String {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    writer.write_record(HEADER).expect("in-memory write");
    for t in 0..events.horizon() {
        writer
            .write_record([
                (t + 1).to_string(),
                events.demand[t].to_string(),
                events.arrivals[t].to_string(),
                events.price[t].to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("flush to vec")).expect("csv is utf-8")
}
