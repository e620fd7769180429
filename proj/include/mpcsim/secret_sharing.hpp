#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mpcsim/field.hpp"

namespace mpcsim {

using Bytes = std::vector<uint8_t>;

enum class Scheme { Additive, Shamir, EcssPerfect, EcssMac };

// Per-party share. For EcssMac, party j additionally carries one
// verification key per peer (keys[i] checks peer i's share) and one tag per
// peer (tags[i] authenticates this share under peer i's key). A key/tag is a
// flat vector of `mac_reps` (a,b) pairs / mac values.
struct SharePayload {
  std::vector<FieldElem> elems;
  std::vector<std::vector<FieldElem>> keys;
  std::vector<std::vector<FieldElem>> tags;
};

struct ShareSet {
  Scheme scheme;
  int n = 0;
  int t = 0;
  size_t secret_len = 0;  // chunk count, including the length-prefix chunk
  int mac_reps = 0;       // EcssMac only
  std::vector<SharePayload> shares;
};

// Little-endian 7-bytes-per-element packing with a length-prefix element;
// injective below p.
std::vector<FieldElem> encode_secret(const Bytes& secret);
Bytes decode_secret(const std::vector<FieldElem>& chunks);

// lambda is the statistical security parameter of the MAC-based scheme
// (ignored by the other schemes).
ShareSet share(const Bytes& secret, Scheme scheme, int n, int t, RngStream& rng,
               int lambda = 40);

// Erasure reconstruction: `present[i]` marks which shares are available.
// Needs at least t+1 present shares and assumes no corruption.
Bytes recon(const ShareSet& shares, const std::vector<bool>& present);

// Error-correcting reconstruction from all n positions, up to t of which may
// hold arbitrary payloads. EcssPerfect is exact; EcssMac fails with
// probability <= 2^-lambda per reconstruction and never silently lies beyond
// that budget.
Bytes ecss_recon(const ShareSet& shares);

// MAC helpers, exposed for tests.
std::vector<FieldElem> mac_tag(const std::vector<FieldElem>& key,
                               const std::vector<FieldElem>& msg);
bool mac_verify(const std::vector<FieldElem>& key,
                const std::vector<FieldElem>& msg,
                const std::vector<FieldElem>& tag);

}  // namespace mpcsim
