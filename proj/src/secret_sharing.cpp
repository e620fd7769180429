#include "mpcsim/secret_sharing.hpp"

#include <algorithm>
#include <cmath>

namespace mpcsim {

std::vector<FieldElem> encode_secret(const Bytes& secret) {
  std::vector<FieldElem> chunks;
  chunks.emplace_back(static_cast<uint64_t>(secret.size()));
  for (size_t off = 0; off < secret.size(); off += 7) {
    uint64_t v = 0;
    for (size_t k = 0; k < 7 && off + k < secret.size(); ++k)
      v |= static_cast<uint64_t>(secret[off + k]) << (8 * k);
    chunks.emplace_back(v);
  }
  return chunks;
}

Bytes decode_secret(const std::vector<FieldElem>& chunks) {
  if (chunks.empty()) throw ReconstructionFailure("empty chunk vector");
  uint64_t len = chunks[0].value();
  if (chunks.size() != 1 + (len + 6) / 7)
    throw ReconstructionFailure("length prefix inconsistent with chunk count");
  Bytes out(len);
  for (size_t off = 0; off < len; off += 7) {
    uint64_t v = chunks[1 + off / 7].value();
    for (size_t k = 0; k < 7 && off + k < len; ++k)
      out[off + k] = static_cast<uint8_t>((v >> (8 * k)) & 0xff);
  }
  return out;
}

namespace {

void check_thresholds(Scheme scheme, int n, int t) {
  if (n < 1 || t < 0 || t >= n) throw InvalidThreshold("need 0 <= t < n");
  switch (scheme) {
    case Scheme::Additive:
      if (t != n - 1) throw InvalidThreshold("additive sharing needs t = n-1");
      break;
    case Scheme::Shamir:
      break;
    case Scheme::EcssPerfect:
      if (3 * t >= n) throw InvalidThreshold("perfect ECSS needs t < n/3");
      break;
    case Scheme::EcssMac:
      if (2 * t >= n) throw InvalidThreshold("MAC ECSS needs t < n/2");
      break;
  }
}

// Shamir-style share of one chunk: evaluations at x = 1..n of a random
// degree-<=t polynomial with the chunk as constant term.
void shamir_chunk(FieldElem chunk, int n, int t, RngStream& rng,
                  std::vector<SharePayload>& out) {
  std::vector<FieldElem> coeffs(t + 1);
  coeffs[0] = chunk;
  for (int k = 1; k <= t; ++k) coeffs[k] = FieldElem::random(rng);
  Poly poly(std::move(coeffs));
  for (int j = 0; j < n; ++j)
    out[j].elems.push_back(poly.eval(FieldElem(j + 1)));
}

int mac_repetitions(int lambda, size_t msg_len) {
  // One (a,b) polynomial MAC over GF(2^61-1) forges with probability
  // msg_len / p; repeat until the product drops below 2^-lambda.
  double bits_per_rep = 61.0 - std::log2(static_cast<double>(msg_len) + 1.0);
  int reps = static_cast<int>(std::ceil(lambda / bits_per_rep));
  return std::max(reps, 1);
}

}  // namespace

std::vector<FieldElem> mac_tag(const std::vector<FieldElem>& key,
                               const std::vector<FieldElem>& msg) {
  std::vector<FieldElem> tag;
  for (size_t r = 0; r + 1 < key.size(); r += 2) {
    FieldElem a = key[r], b = key[r + 1];
    FieldElem acc = b;
    FieldElem ap = a;
    for (FieldElem m : msg) {
      acc += m * ap;
      ap *= a;
    }
    tag.push_back(acc);
  }
  return tag;
}

bool mac_verify(const std::vector<FieldElem>& key,
                const std::vector<FieldElem>& msg,
                const std::vector<FieldElem>& tag) {
  return mac_tag(key, msg) == tag;
}

ShareSet share(const Bytes& secret, Scheme scheme, int n, int t,
               RngStream& rng, int lambda) {
  check_thresholds(scheme, n, t);
  auto chunks = encode_secret(secret);
  ShareSet set;
  set.scheme = scheme;
  set.n = n;
  set.t = t;
  set.secret_len = chunks.size();
  set.shares.resize(n);

  if (scheme == Scheme::Additive) {
    for (FieldElem chunk : chunks) {
      FieldElem sum(0);
      for (int j = 0; j + 1 < n; ++j) {
        FieldElem s = FieldElem::random(rng);
        set.shares[j].elems.push_back(s);
        sum += s;
      }
      set.shares[n - 1].elems.push_back(chunk - sum);
    }
    return set;
  }

  for (FieldElem chunk : chunks) shamir_chunk(chunk, n, t, rng, set.shares);

  if (scheme == Scheme::EcssMac) {
    set.mac_reps = mac_repetitions(lambda, chunks.size());
    for (int i = 0; i < n; ++i) {
      set.shares[i].keys.resize(n);
      set.shares[i].tags.resize(n);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        std::vector<FieldElem> key;
        for (int r = 0; r < 2 * set.mac_reps; ++r)
          key.push_back(FieldElem::random(rng));
        set.shares[i].keys[j] = key;
        set.shares[j].tags[i] = mac_tag(key, set.shares[j].elems);
      }
    }
  }
  return set;
}

Bytes recon(const ShareSet& set, const std::vector<bool>& present) {
  if (present.size() != static_cast<size_t>(set.n))
    throw SpecError("present mask size mismatch");
  std::vector<int> avail;
  for (int j = 0; j < set.n; ++j)
    if (present[j]) avail.push_back(j);

  if (set.scheme == Scheme::Additive) {
    if (static_cast<int>(avail.size()) < set.n)
      throw InsufficientShares("additive reconstruction needs all n shares");
    std::vector<FieldElem> chunks(set.secret_len, FieldElem(0));
    for (int j : avail)
      for (size_t c = 0; c < set.secret_len; ++c)
        chunks[c] += set.shares[j].elems[c];
    return decode_secret(chunks);
  }

  if (static_cast<int>(avail.size()) < set.t + 1)
    throw InsufficientShares("need t+1 present shares");
  avail.resize(set.t + 1);
  std::vector<FieldElem> chunks;
  for (size_t c = 0; c < set.secret_len; ++c) {
    PointVec pts;
    for (int j : avail)
      pts.emplace_back(FieldElem(j + 1), set.shares[j].elems[c]);
    chunks.push_back(lagrange_at_zero(pts));
  }
  return decode_secret(chunks);
}

Bytes ecss_recon(const ShareSet& set) {
  if (set.scheme == Scheme::EcssPerfect) {
    std::vector<FieldElem> chunks;
    for (size_t c = 0; c < set.secret_len; ++c) {
      PointVec pts;
      for (int j = 0; j < set.n; ++j)
        pts.emplace_back(FieldElem(j + 1), set.shares[j].elems[c]);
      Poly f = bw_decode(pts, set.t + 1, set.t);
      chunks.push_back(f.eval(FieldElem(0)));
    }
    return decode_secret(chunks);
  }
  if (set.scheme != Scheme::EcssMac)
    throw SpecError("ecss_recon requires an error-correcting scheme");

  // A share is accepted when at least n-t-1 of the other parties' keys
  // verify it: honest shares clear that bar through honest verifiers alone,
  // while a modified share would need a MAC forgery, since the <= t-1 other
  // corrupted verifiers cannot reach it.
  std::vector<int> accepted;
  for (int j = 0; j < set.n; ++j) {
    if (set.shares[j].elems.size() != set.secret_len ||
        set.shares[j].tags.size() != static_cast<size_t>(set.n)) {
      continue;  // structurally mangled payload
    }
    int ok = 0;
    for (int i = 0; i < set.n; ++i) {
      if (i == j) continue;
      if (set.shares[i].keys.size() != static_cast<size_t>(set.n)) continue;
      if (mac_verify(set.shares[i].keys[j], set.shares[j].elems,
                     set.shares[j].tags[i]))
        ++ok;
    }
    if (ok >= set.n - set.t - 1) accepted.push_back(j);
  }
  if (static_cast<int>(accepted.size()) < set.t + 1)
    throw ReconstructionFailure("too few authenticated shares");

  std::vector<FieldElem> chunks;
  for (size_t c = 0; c < set.secret_len; ++c) {
    PointVec pts;
    for (size_t k = 0; k <= static_cast<size_t>(set.t); ++k)
      pts.emplace_back(FieldElem(accepted[k] + 1),
                       set.shares[accepted[k]].elems[c]);
    Poly f = lagrange_interpolate(pts);
    for (int j : accepted)
      if (f.eval(FieldElem(j + 1)) != set.shares[j].elems[c])
        throw ReconstructionFailure("authenticated shares are inconsistent");
    chunks.push_back(f.eval(FieldElem(0)));
  }
  return decode_secret(chunks);
}

}  // namespace mpcsim
