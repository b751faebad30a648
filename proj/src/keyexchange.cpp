#include "molsec/keyexchange.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "molsec/csv.hpp"
#include "molsec/errors.hpp"

namespace molsec::keyexchange {

namespace {

// One party's running view of the exchange.
struct PartyState {
    std::vector<std::size_t> kept_indexes;
    BitVector kept_a_bits;
    BitVector kept_c_bits;
};

void absorb(PartyState& party, const SiftResult& round, std::size_t offset, bool self_is_a, std::size_t target) {
    for (std::size_t i = 0; i < round.kept_indexes.size() && party.kept_indexes.size() < target; ++i) {
        party.kept_indexes.push_back(offset + round.kept_indexes[i]);
        party.kept_a_bits.push_back(self_is_a ? round.kept_self_bits[i] : round.kept_peer_bits[i]);
        party.kept_c_bits.push_back(self_is_a ? round.kept_peer_bits[i] : round.kept_self_bits[i]);
    }
}

} // namespace

std::size_t KeySession::slots_needed() const noexcept {
    std::size_t needed = 0;
    if (!kept_indexes.empty())
        needed = kept_indexes.back() + 1;
    if (!kept_indexes_c.empty())
        needed = std::max(needed, kept_indexes_c.back() + 1);
    return needed;
}

BitVector random_bits(std::size_t n, Rng& rng) {
    if (n == 0)
        throw EmptyInputError("random_bits: n must be >= 1");
    BitVector bits(n);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0)
            word = rng();
        bits[i] = static_cast<Bit>(word & 1U);
        word >>= 1;
    }
    return bits;
}

SiftResult sift(BitSpan sent_self, BitSpan decoded_peer) {
    if (sent_self.size() != decoded_peer.size())
        throw LengthMismatchError("sift: sequences of length " + std::to_string(sent_self.size()) + " and " +
                                  std::to_string(decoded_peer.size()));
    SiftResult result;
    for (std::size_t i = 0; i < sent_self.size(); ++i) {
        if (sent_self[i] != decoded_peer[i]) {
            result.kept_indexes.push_back(i);
            result.kept_self_bits.push_back(sent_self[i]);
            result.kept_peer_bits.push_back(decoded_peer[i]);
        }
    }
    return result;
}

BitVector extract_key(BitSpan kept_a_bits, BitSpan kept_c_bits, KeySource policy) {
    if (kept_a_bits.size() != kept_c_bits.size())
        throw SiftViolationError("extract_key: kept sequences differ in length");
    for (std::size_t i = 0; i < kept_a_bits.size(); ++i) {
        if (kept_a_bits[i] == kept_c_bits[i])
            throw SiftViolationError("extract_key: kept position " + std::to_string(i) + " has equal bits");
    }
    BitSpan chosen = policy == KeySource::PartyA ? kept_a_bits : kept_c_bits;
    return BitVector(chosen.begin(), chosen.end());
}

KeySession run_key_exchange(std::size_t target_key_bits, KeySource policy, const ChannelParams& params,
                            std::size_t batch_size, Rng& rng) {
    BitSource from_rng = [&rng](std::size_t n) { return random_bits(n, rng); };
    return run_key_exchange(target_key_bits, policy, params, batch_size, from_rng, from_rng, rng);
}

KeySession run_key_exchange(std::size_t target_key_bits, KeySource policy, const ChannelParams& params,
                            std::size_t batch_size, const BitSource& source_a, const BitSource& source_c,
                            Rng& noise_rng) {
    if (target_key_bits == 0)
        throw EmptyInputError("run_key_exchange: target_key_bits must be >= 1");
    if (batch_size == 0)
        throw ConfigError("run_key_exchange: batch_size must be >= 1");
    params.validate();

    KeySession session;
    session.target_key_bits = target_key_bits;
    session.policy = policy;

    PartyState at_a;
    PartyState at_c;
    while (at_a.kept_indexes.size() < target_key_bits || at_c.kept_indexes.size() < target_key_bits) {
        const BitVector round_a = source_a(batch_size);
        const BitVector round_c = source_c(batch_size);
        if (round_a.size() != batch_size || round_c.size() != batch_size)
            throw LengthMismatchError("run_key_exchange: bit source returned a short batch");

        const channel::Emission emit_a = channel::modulate(round_a, params);
        const channel::Emission emit_c = channel::modulate(round_c, params);

        BitVector heard_c(batch_size);
        BitVector heard_a(batch_size);
        for (std::size_t i = 0; i < batch_size; ++i) {
            const SlotRecord slot = channel::transmit_slot(emit_a.counts[i], emit_c.counts[i], params, noise_rng);
            heard_c[i] = channel::decode_peer_bit(slot.observed, slot.emitted_a, params);
            heard_a[i] = channel::decode_peer_bit(slot.observed, slot.emitted_c, params);
            session.transcript.push_back(slot);
        }

        const std::size_t offset = session.sent_a.size();
        absorb(at_a, sift(round_a, heard_c), offset, true, target_key_bits);
        absorb(at_c, sift(round_c, heard_a), offset, false, target_key_bits);

        session.sent_a.insert(session.sent_a.end(), round_a.begin(), round_a.end());
        session.sent_c.insert(session.sent_c.end(), round_c.begin(), round_c.end());
        session.decoded_at_a.insert(session.decoded_at_a.end(), heard_c.begin(), heard_c.end());
        session.decoded_at_c.insert(session.decoded_at_c.end(), heard_a.begin(), heard_a.end());
    }

    session.kept_indexes = std::move(at_a.kept_indexes);
    session.kept_indexes_c = std::move(at_c.kept_indexes);
    session.key_a = extract_key(at_a.kept_a_bits, at_a.kept_c_bits, policy);
    session.key_c = extract_key(at_c.kept_a_bits, at_c.kept_c_bits, policy);
    session.status = session.key_a == session.key_c ? SessionStatus::Agreed : SessionStatus::KeyMismatch;
    return session;
}

CaseLabel eavesdrop_classify(MoleculeCount observed, const ChannelParams& params) {
    if (observed < params.threshold)
        return CaseLabel::BothZero;
    if (observed < params.z1 + params.threshold)
        return CaseLabel::Ambiguous;
    return CaseLabel::BothOne;
}

AttackOutcome eavesdrop_attack(const KeySession& session, const ChannelParams& params, Rng& rng) {
    AttackOutcome outcome;
    const std::size_t key_bits = session.key_a.size();
    for (std::size_t i = 0; i < session.transcript.size() && outcome.reconstructed_indexes.size() < key_bits; ++i) {
        if (eavesdrop_classify(session.transcript[i].observed, params) == CaseLabel::Ambiguous)
            outcome.reconstructed_indexes.push_back(i);
    }
    if (key_bits > 0)
        outcome.guessed_key = random_bits(key_bits, rng);
    outcome.success = outcome.guessed_key == session.key_a;
    return outcome;
}

void write_transcript_csv(const KeySession& session, std::ostream& out) {
    csv::Table table({"slot_index", "emitted_a", "emitted_c", "channel_sum", "kept"});
    std::size_t next_kept = 0;
    for (std::size_t i = 0; i < session.transcript.size(); ++i) {
        const SlotRecord& slot = session.transcript[i];
        const bool kept = next_kept < session.kept_indexes.size() && session.kept_indexes[next_kept] == i;
        if (kept)
            ++next_kept;
        table.add_row({csv::format(i), csv::format(slot.emitted_a), csv::format(slot.emitted_c),
                       csv::format(slot.channel_sum), kept ? "1" : "0"});
    }
    table.write(out);
}

const char* to_string(KeySource source) noexcept {
    return source == KeySource::PartyA ? "a" : "c";
}

const char* to_string(CaseLabel label) noexcept {
    switch (label) {
    case CaseLabel::BothZero: return "BothZero";
    case CaseLabel::BothOne: return "BothOne";
    case CaseLabel::Ambiguous: return "Ambiguous";
    }
    return "?";
}

} // namespace molsec::keyexchange
