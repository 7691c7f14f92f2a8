#pragma once

// Serialization. All integers are little-endian with fixed widths; a field
// element occupies ceil(log2 q) bits rounded up to whole bytes, in the base
// field of the session. Files and wire messages therefore compare byte for
// byte across runs and platforms.
//
// Dealer file ("SAGD", version 1):
//   magic[4] version:u16 scheme_tag:u8 reserved:u8
//   K:u32 U:u32 T:u32 p:u64 m:u32 B:u32 L:u64
//   per user, ascending id:
//     id:u32  mask[L elements]  share_count:u32
//     per share, ascending set mask: set:u32 payload[L/(U-T) elements]
//
// Transcript file ("SAGT", version 1):
//   magic[4] version:u16 reserved:u16 session:u32
//   K:u32 U:u32 T:u32 p:u64 m:u32 B:u32 L:u64
//   survivors:u32 responders:u32 round1_count:u32 {wire message} round2_count:u32 {wire message}
//
// Wire message: session:u32 round:u8 sender:u32 set:u32 payload[...]
//   (set is the survivor-set mask for round 2, zero for round 1; payload is
//   L elements for round 1, L/(U-T) for round 2).
//
// Inputs file: plain text, one line per user, L base-10 integers in [0, q).

#include <cstdint>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dealer.hpp"
#include "field.hpp"
#include "protocol.hpp"
#include "session.hpp"
#include "sets.hpp"
#include "simulator.hpp"

namespace secagg {

struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

namespace wire {

inline void put_bytes(std::ostream& os, std::uint64_t v, unsigned width) {
    for (unsigned i = 0; i < width; ++i) {
        os.put(static_cast<char>(v & 0xff));
        v >>= 8;
    }
}

inline std::uint64_t get_bytes(std::istream& is, unsigned width) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) {
        int c = is.get();
        if (c == EOF) throw io_error("unexpected end of input");
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return v;
}

inline void put_u8(std::ostream& os, std::uint8_t v) { put_bytes(os, v, 1); }
inline void put_u16(std::ostream& os, std::uint16_t v) { put_bytes(os, v, 2); }
inline void put_u32(std::ostream& os, std::uint32_t v) { put_bytes(os, v, 4); }
inline void put_u64(std::ostream& os, std::uint64_t v) { put_bytes(os, v, 8); }
inline std::uint8_t get_u8(std::istream& is) { return static_cast<std::uint8_t>(get_bytes(is, 1)); }
inline std::uint16_t get_u16(std::istream& is) { return static_cast<std::uint16_t>(get_bytes(is, 2)); }
inline std::uint32_t get_u32(std::istream& is) { return static_cast<std::uint32_t>(get_bytes(is, 4)); }
inline std::uint64_t get_u64(std::istream& is) { return get_bytes(is, 8); }

inline void put_elems(std::ostream& os, const Field& f, const std::vector<felem>& v) {
    for (felem x : v) {
        if (!f.valid(x)) throw io_error("element outside field during serialization");
        put_bytes(os, x, f.width_bytes());
    }
}

inline std::vector<felem> get_elems(std::istream& is, const Field& f, std::size_t n) {
    std::vector<felem> v(n);
    for (felem& x : v) {
        x = get_bytes(is, f.width_bytes());
        if (!f.valid(x)) throw io_error("element outside field during deserialization");
    }
    return v;
}

}  // namespace wire

inline void write_params(std::ostream& os, const SessionParams& sp) {
    wire::put_u32(os, static_cast<std::uint32_t>(sp.users));
    wire::put_u32(os, static_cast<std::uint32_t>(sp.min_responders));
    wire::put_u32(os, static_cast<std::uint32_t>(sp.max_colluders));
    wire::put_u64(os, sp.base_field->characteristic());
    wire::put_u32(os, sp.base_field->degree());
    wire::put_u32(os, static_cast<std::uint32_t>(sp.grouping));
    wire::put_u64(os, static_cast<std::uint64_t>(sp.input_len));
}

inline SessionParams read_params(std::istream& is) {
    int users = static_cast<int>(wire::get_u32(is));
    int min_responders = static_cast<int>(wire::get_u32(is));
    int max_colluders = static_cast<int>(wire::get_u32(is));
    std::uint64_t p = wire::get_u64(is);
    unsigned m = wire::get_u32(is);
    int grouping = static_cast<int>(wire::get_u32(is));
    long input_len = static_cast<long>(wire::get_u64(is));
    auto base = std::make_shared<const Field>(p, m);
    return SessionParams::make(users, min_responders, max_colluders, base, grouping, input_len,
                               /*allow_large=*/true);
}

// ---- dealer output ---------------------------------------------------------

inline void write_dealer_output(std::ostream& os, const DealerOutput& out) {
    const SessionParams& sp = out.scheme->params;
    const Field& base = *sp.base_field;
    os.write("SAGD", 4);
    wire::put_u16(os, 1);
    std::uint8_t tag = out.scheme->options.structured ? 1 : (out.scheme->options.zero_noise ? 2 : 0);
    wire::put_u8(os, tag);
    wire::put_u8(os, 0);
    write_params(os, sp);
    for (int k = 1; k <= sp.users; ++k) {
        const UserRandomness& ur = out.users[static_cast<std::size_t>(k - 1)];
        wire::put_u32(os, static_cast<std::uint32_t>(k));
        std::vector<felem> mask_base =
            sp.grouping == 1 ? ur.self_mask
                             : group_unpack_vec(base, static_cast<unsigned>(sp.grouping), ur.self_mask);
        wire::put_elems(os, base, mask_base);
        wire::put_u32(os, static_cast<std::uint32_t>(ur.shares.size()));
        for (const auto& [set, payload] : ur.shares) {
            wire::put_u32(os, set);
            std::vector<felem> payload_base =
                sp.grouping == 1 ? payload
                                 : group_unpack_vec(base, static_cast<unsigned>(sp.grouping), payload);
            wire::put_elems(os, base, payload_base);
        }
    }
}

/// Rebuilds the scheme from the header and reads the per-user randomness.
/// Noise seed values are not stored in the file (only the shares are), so
/// the returned SeedSet carries reconstructed masks and empty noise.
inline DealerOutput read_dealer_output(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (is.gcount() != 4 || std::string(magic, 4) != "SAGD") throw io_error("not a dealer file");
    if (wire::get_u16(is) != 1) throw io_error("unsupported dealer file version");
    std::uint8_t tag = wire::get_u8(is);
    wire::get_u8(is);
    SessionParams sp = read_params(is);
    SchemeOptions opt;
    opt.structured = tag == 1;
    opt.zero_noise = tag == 2;
    if (tag > 2) throw io_error("unknown scheme tag");

    DealerOutput out;
    out.scheme = Scheme::build(sp, opt);
    const Field& base = *sp.base_field;
    out.users.resize(static_cast<std::size_t>(sp.users));
    out.seeds.self_masks.resize(static_cast<std::size_t>(sp.users));
    for (int k = 1; k <= sp.users; ++k) {
        if (static_cast<int>(wire::get_u32(is)) != k) throw io_error("user records out of order");
        UserRandomness& ur = out.users[static_cast<std::size_t>(k - 1)];
        std::vector<felem> mask_base = wire::get_elems(is, base, static_cast<std::size_t>(sp.input_len));
        ur.self_mask = sp.grouping == 1
                           ? mask_base
                           : group_pack_vec(base, static_cast<unsigned>(sp.grouping), mask_base);
        out.seeds.self_masks[static_cast<std::size_t>(k - 1)] = ur.self_mask;
        std::uint32_t count = wire::get_u32(is);
        for (std::uint32_t i = 0; i < count; ++i) {
            UserSet set = wire::get_u32(is);
            std::vector<felem> payload_base =
                wire::get_elems(is, base, static_cast<std::size_t>(sp.share_len_base()));
            ur.shares.emplace_back(set, sp.grouping == 1
                                            ? payload_base
                                            : group_pack_vec(base, static_cast<unsigned>(sp.grouping),
                                                             payload_base));
        }
    }
    return out;
}

// ---- messages and transcripts ----------------------------------------------

inline void write_round1(std::ostream& os, const Field& base, std::uint32_t session,
                         const Round1Message& m) {
    wire::put_u32(os, session);
    wire::put_u8(os, 1);
    wire::put_u32(os, static_cast<std::uint32_t>(m.sender));
    wire::put_u32(os, 0);
    wire::put_elems(os, base, m.payload);
}

inline void write_round2(std::ostream& os, const Field& base, std::uint32_t session,
                         const Round2Message& m) {
    wire::put_u32(os, session);
    wire::put_u8(os, 2);
    wire::put_u32(os, static_cast<std::uint32_t>(m.sender));
    wire::put_u32(os, m.survivor_set);
    wire::put_elems(os, base, m.payload);
}

inline void write_transcript(std::ostream& os, const SessionParams& sp, const Transcript& t) {
    os.write("SAGT", 4);
    wire::put_u16(os, 1);
    wire::put_u16(os, 0);
    wire::put_u32(os, t.session_id);
    write_params(os, sp);
    wire::put_u32(os, t.survivors);
    wire::put_u32(os, t.responders);
    wire::put_u32(os, static_cast<std::uint32_t>(t.round1.size()));
    for (const Round1Message& m : t.round1) write_round1(os, *sp.base_field, t.session_id, m);
    wire::put_u32(os, static_cast<std::uint32_t>(t.round2.size()));
    for (const Round2Message& m : t.round2) write_round2(os, *sp.base_field, t.session_id, m);
}

inline Transcript read_transcript(std::istream& is, SessionParams* params_out = nullptr) {
    char magic[4];
    is.read(magic, 4);
    if (is.gcount() != 4 || std::string(magic, 4) != "SAGT") throw io_error("not a transcript file");
    if (wire::get_u16(is) != 1) throw io_error("unsupported transcript version");
    wire::get_u16(is);
    Transcript t;
    t.session_id = wire::get_u32(is);
    SessionParams sp = read_params(is);
    if (params_out) *params_out = sp;
    t.survivors = wire::get_u32(is);
    t.responders = wire::get_u32(is);
    std::uint32_t n1 = wire::get_u32(is);
    for (std::uint32_t i = 0; i < n1; ++i) {
        if (wire::get_u32(is) != t.session_id) throw io_error("session id mismatch in message");
        if (wire::get_u8(is) != 1) throw io_error("expected a round-1 message");
        Round1Message m;
        m.sender = static_cast<int>(wire::get_u32(is));
        wire::get_u32(is);
        m.payload = wire::get_elems(is, *sp.base_field, static_cast<std::size_t>(sp.input_len));
        t.round1.push_back(std::move(m));
    }
    std::uint32_t n2 = wire::get_u32(is);
    for (std::uint32_t i = 0; i < n2; ++i) {
        if (wire::get_u32(is) != t.session_id) throw io_error("session id mismatch in message");
        if (wire::get_u8(is) != 2) throw io_error("expected a round-2 message");
        Round2Message m;
        m.sender = static_cast<int>(wire::get_u32(is));
        m.survivor_set = wire::get_u32(is);
        m.payload = wire::get_elems(is, *sp.base_field, static_cast<std::size_t>(sp.share_len_base()));
        t.round2.push_back(std::move(m));
    }
    return t;
}

// ---- inputs ------------------------------------------------------------------

inline std::vector<InputVector> parse_inputs(std::istream& is, const SessionParams& sp) {
    std::vector<InputVector> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        InputVector iv;
        std::uint64_t v;
        while (ls >> v) {
            if (!sp.base_field->valid(v))
                throw io_error("inputs line " + std::to_string(lineno) + ": value " +
                               std::to_string(v) + " outside the field");
            iv.w.push_back(v);
        }
        if (!ls.eof())
            throw io_error("inputs line " + std::to_string(lineno) + ": not an integer");
        if (static_cast<long>(iv.w.size()) != sp.input_len)
            throw io_error("inputs line " + std::to_string(lineno) + ": expected " +
                           std::to_string(sp.input_len) + " values, got " +
                           std::to_string(iv.w.size()));
        out.push_back(std::move(iv));
    }
    if (static_cast<int>(out.size()) != sp.users)
        throw io_error("inputs file: expected " + std::to_string(sp.users) + " lines, got " +
                       std::to_string(out.size()));
    return out;
}

inline void write_inputs(std::ostream& os, const std::vector<InputVector>& inputs) {
    for (const InputVector& iv : inputs) {
        for (std::size_t i = 0; i < iv.w.size(); ++i) {
            if (i) os << ' ';
            os << iv.w[i];
        }
        os << '\n';
    }
}

// ---- text reports ------------------------------------------------------------

inline std::string params_line(const SessionParams& sp) {
    std::ostringstream os;
    os << "params K=" << sp.users << " U=" << sp.min_responders << " T=" << sp.max_colluders
       << " p=" << sp.base_field->characteristic() << " m=" << sp.base_field->degree()
       << " B=" << sp.grouping << " L=" << sp.input_len;
    return os.str();
}

inline std::string set_hex(UserSet s) {
    std::ostringstream os;
    os << "0x" << std::hex << s;
    return os.str();
}

inline std::string format_experiment_report(const ExperimentReport& rep,
                                            const std::vector<std::string>& transcript_files) {
    std::ostringstream os;
    os << "# aggregation experiment report\n";
    os << params_line(rep.params) << "\n";
    os << "seed " << rep.seed << "\n";
    os << "records " << rep.records.size() << "\n";
    for (const ScheduleRecord& r : rep.records) {
        os << "record survivors=" << set_hex(r.schedule.survivors)
           << " responders=" << set_hex(r.schedule.responders)
           << " colluders=" << set_hex(r.colluders)
           << " decode=" << (r.decode_ok ? "ok" : "FAIL") << " transcript="
           << (r.transcript_index < transcript_files.size() ? transcript_files[r.transcript_index]
                                                            : std::string("-"))
           << "\n";
    }
    return os.str();
}

}  // namespace secagg
