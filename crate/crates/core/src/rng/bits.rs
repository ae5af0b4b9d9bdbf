use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// On-disk bit formats. `Packed` stores eight bits per byte, most
/// significant bit first; a final partial byte is padded with zeros and
/// carries no length, so readers get a multiple of eight bits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BitFormat {
    #[default]
    Ascii,
    Packed,
}

impl BitFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ascii" => Ok(BitFormat::Ascii),
            "packed" => Ok(BitFormat::Packed),
            _ => Err(Error::InvalidArgument(format!("unknown bit format {s:?}"))),
        }
    }
}

pub fn write_bits<W: Write>(mut out: W, bits: &[u8], format: BitFormat) -> Result<()> {
    match format {
        BitFormat::Ascii => {
            let text: Vec<u8> = bits
                .iter()
                .map(|&b| if b == 0 { b'0' } else { b'1' })
                .collect();
            out.write_all(&text)?;
            out.write_all(b"\n")?;
        }
        BitFormat::Packed => {
            let bytes: Vec<u8> = bits
                .chunks(8)
                .map(|c| {
                    c.iter()
                        .enumerate()
                        .fold(0u8, |acc, (i, &b)| acc | ((b & 1) << (7 - i)))
                })
                .collect();
            out.write_all(&bytes)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// ASCII input ignores whitespace and rejects anything but `0` and `1`.
pub fn read_bits<R: Read>(mut input: R, format: BitFormat) -> Result<Vec<u8>> {
    let mut raw = Vec::new();
    input.read_to_end(&mut raw)?;
    match format {
        BitFormat::Ascii => raw
            .iter()
            .filter(|c| !c.is_ascii_whitespace())
            .map(|&c| match c {
                b'0' => Ok(0),
                b'1' => Ok(1),
                _ => Err(Error::InvalidArgument(format!(
                    "unexpected byte {:?} in ASCII bit file",
                    c as char
                ))),
            })
            .collect(),
        BitFormat::Packed => Ok(raw
            .iter()
            .flat_map(|&byte| (0..8).map(move |i| (byte >> (7 - i)) & 1))
            .collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_is_msb_first() {
        let bits = [1, 0, 0, 0, 0, 0, 0, 1, 1];
        let mut buf = Vec::new();
        write_bits(&mut buf, &bits, BitFormat::Packed).unwrap();
        assert_eq!(buf, [0x81, 0x80]);
        let back = read_bits(&buf[..], BitFormat::Packed).unwrap();
        assert_eq!(&back[..9], &bits);
        assert_eq!(back.len(), 16);
    }

    #[test]
    fn ascii_round_trip() {
        let bits = [0, 1, 1, 0];
        let mut buf = Vec::new();
        write_bits(&mut buf, &bits, BitFormat::Ascii).unwrap();
        assert_eq!(buf, b"0110\n");
        assert_eq!(read_bits(&b"01 1\n0"[..], BitFormat::Ascii).unwrap(), bits);
        assert!(read_bits(&b"012"[..], BitFormat::Ascii).is_err());
    }
}
