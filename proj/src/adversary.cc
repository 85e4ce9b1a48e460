// Copyright 2026 The DCEA Simulator Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dcea/adversary.h"

#include <algorithm>
#include <utility>

#include "absl/strings/str_cat.h"
#include "dcea/bundle_codec.h"
#include "dcea/status.h"

namespace dcea::adversary {
namespace {

using evidence::EvidenceBundle;
using json_util::Json;
using verifier::Attack;
using verifier::CheckId;

std::string S(std::string_view v) { return std::string(v); }

std::string SeedTag(const World& world, std::string_view what,
                    std::string_view who = "") {
  return absl::StrCat(S(what), "/", S(who), "/", world.rng_seed);
}

std::string RandomTag(Prng& prng, std::string_view prefix) {
  return absl::StrCat(S(prefix), "-", HexEncode(prng.NextBytes(8)));
}

absl::Status WorldError(std::string_view message) {
  return MakeError(ErrorCode::kWorldError, message);
}

absl::Status UnknownScenario(std::string_view message) {
  return MakeError(ErrorCode::kUnknownScenario, message);
}

// ---------------------------------------------------------------------------
// Hosts, TDs and the in-guest agent.

Claims HostClaims(const World& world, const std::string& host) {
  return {{"platform_id", host},
          {"provider", world.config.provider},
          {"region", world.config.region}};
}

absl::StatusOr<tpm::TpmState> FreshHostTpm(const World& world,
                                           const std::string& host) {
  return tpm::TpmInit(ToBytes(SeedTag(world, "ek", host)),
                      world.authorities.provider_ca, HostClaims(world, host),
                      tpm::TpmKind::kDiscrete);
}

absl::Status RegisterAk(World& world, const tpm::TpmState& tpm, tpm::AkHandle ak,
                        const std::string& host,
                        verifier::RegisterResult* result = nullptr) {
  auto it = tpm.aks.find(ak);
  if (it == tpm.aks.end()) return WorldError("AK handle missing");
  verifier::RegisterResult r = world.registry->Register(
      it->second.keypair.public_key,
      {KeyId(tpm.ek.public_key), world.clock_ms, host});
  if (result != nullptr) *result = r;
  return absl::OkStatus();
}

void EnsureHostLinks(World& world, const std::string& host) {
  world.links[VerifierLink(host)].one_way_delay_ms = world.config.verifier_delay_ms;
  world.links[ReturnLink(host)].one_way_delay_ms = world.config.verifier_delay_ms;
  world.links[TpmLink(host, host)].one_way_delay_ms = world.config.local_delay_ms;
  world.links[TpmReturnLink(host, host)].one_way_delay_ms =
      world.config.local_delay_ms;
}

void EnsureRelayLinks(World& world, const std::string& td_host,
                      const std::string& tpm_host) {
  world.links[TpmLink(td_host, tpm_host)].one_way_delay_ms =
      world.config.relay_delay_ms;
  world.links[TpmReturnLink(td_host, tpm_host)].one_way_delay_ms =
      world.config.relay_delay_ms;
}

const Bytes& AkPublic(const tpm::TpmState& tpm, tpm::AkHandle ak) {
  return tpm.aks.at(ak).keypair.public_key;
}

// In-guest agent: records one event in the TD and/or the mirror TPM.
absl::Status AgentExtend(td::TdState* td, tpm::TpmState* mirror,
                         const WorkloadEvent& ev) {
  td::GuestEvent guest = td::MakeGuestEvent(ev.rtmr_index, ev.pcr_index,
                                            ToBytes(ev.data), ev.description);
  if (td != nullptr) {
    DCEA_ASSIGN_OR_RETURN(*td, td::RtmrExtend(std::move(*td), guest));
  }
  if (mirror != nullptr) {
    EventLogEntry entry = td::ToLogEntry(guest);
    DCEA_RETURN_IF_ERROR(ValidateEntry(entry));
    DCEA_ASSIGN_OR_RETURN(*mirror, tpm::ExtendMeasurement(std::move(*mirror), entry));
  }
  return absl::OkStatus();
}

// Launches a TD on `td_host` bound to `ak_pub` and runs `workload`, with the
// agent mirroring every measurement into `mirror`.
absl::Status LaunchTd(World& world, const std::string& td_host, ByteSpan ak_pub,
                      const std::vector<WorkloadEvent>& workload,
                      tpm::TpmState* mirror) {
  auto platform = world.platforms.find(td_host);
  if (platform == world.platforms.end()) {
    return WorldError(absl::StrCat("no platform '", td_host, "'"));
  }
  DCEA_ASSIGN_OR_RETURN(
      td::TdState td,
      td::TdLaunch(platform->second, ToBytes(world.config.td_firmware), ak_pub,
                   ToBytes(absl::StrCat("tenant@", td_host))));
  if (mirror != nullptr) {
    DCEA_ASSIGN_OR_RETURN(*mirror,
                          tpm::ExtendMeasurement(std::move(*mirror), td::MrtdEntry(td)));
  }
  for (const WorkloadEvent& ev : workload) {
    DCEA_RETURN_IF_ERROR(AgentExtend(&td, mirror, ev));
  }
  world.tds[td_host] = std::move(td);
  return absl::OkStatus();
}

// Reboots `host` into `stack`. The EK is unchanged and the previously
// provisioned AK blob is reloaded into the new quoting TPM.
absl::Status RelaunchHost(World& world, const std::string& host,
                          const StackSpec& stack) {
  DCEA_ASSIGN_OR_RETURN(tpm::TpmState * quoting, QuotingTpm(world, host));
  DCEA_ASSIGN_OR_RETURN(tpm::AkHandle ak, QuotingAk(world, host));
  DCEA_ASSIGN_OR_RETURN(tpm::SealedAk blob, tpm::ExportSealedAk(*quoting, ak));

  DCEA_ASSIGN_OR_RETURN(tpm::TpmState fresh, FreshHostTpm(world, host));
  DCEA_ASSIGN_OR_RETURN(platform::Platform launched,
                        platform::MeasuredLaunch(stack.ToHostStack(), std::move(fresh)));
  if (world.config.deployment == Deployment::kS2) {
    DCEA_ASSIGN_OR_RETURN(tpm::AkResult loaded,
                          tpm::LoadSealedAk(std::move(launched.tpm), std::move(blob)));
    launched.tpm = std::move(loaded.tpm);
    world.platform_aks[host] = loaded.handle;
  } else {
    DCEA_ASSIGN_OR_RETURN(
        platform::VtpmInstance vtpm,
        platform::InstantiateVtpm(launched, world.authorities.provider_ca,
                                  ToBytes(SeedTag(world, "vtpm", host)),
                                  world.config.ak_policy_pcrs));
    vtpm.tpm.aks.clear();
    DCEA_ASSIGN_OR_RETURN(tpm::AkResult loaded,
                          tpm::LoadSealedAk(std::move(vtpm.tpm), std::move(blob)));
    world.vtpms[host] = {std::move(loaded.tpm), loaded.handle};
  }
  world.platforms[host] = std::move(launched);
  world.tds.erase(host);
  return absl::OkStatus();
}

// ---------------------------------------------------------------------------
// One challenge/response exchange.

using QuoteFn = std::function<absl::StatusOr<tpm::TpmQuote>(const tpm::Nonce&)>;

struct Session {
  std::string td_host;
  std::string tpm_host;
  tpm::TpmState* tpm = nullptr;  // signs quotes and supplies the event log
  QuoteFn quote;
  CertChain ek_chain;
  std::optional<Certificate> ak_cert;
  const KeyPair* qe = nullptr;
  const CertChain* qe_chain = nullptr;
  std::map<std::string, std::string> meta;
};

absl::StatusOr<Session> DefaultSession(World& world, const std::string& td_host,
                                       const std::string& tpm_host) {
  Session s;
  s.td_host = td_host;
  s.tpm_host = tpm_host;
  DCEA_ASSIGN_OR_RETURN(s.tpm, QuotingTpm(world, tpm_host));
  DCEA_ASSIGN_OR_RETURN(tpm::AkHandle ak, QuotingAk(world, tpm_host));
  tpm::TpmState* t = s.tpm;
  s.quote = [t, ak](const tpm::Nonce& nonce) {
    return tpm::Quote(*t, ak, QuoteSelection(), nonce);
  };
  s.ek_chain = {t->ek_cert, world.authorities.provider_root};
  s.ak_cert = t->aks.at(ak).ak_cert;
  s.qe = &world.authorities.qe;
  s.qe_chain = &world.authorities.qe_chain;
  return s;
}

Session WithAk(Session s, tpm::AkHandle ak) {
  tpm::TpmState* t = s.tpm;
  s.quote = [t, ak](const tpm::Nonce& nonce) {
    return tpm::Quote(*t, ak, QuoteSelection(), nonce);
  };
  s.ak_cert = t->aks.at(ak).ak_cert;
  return s;
}

Bytes ToPayload(const std::string& text) { return Bytes(text.begin(), text.end()); }
std::string FromPayload(const Bytes& b) { return std::string(b.begin(), b.end()); }

Bytes ChallengePayload(const verifier::Challenge& c) {
  Bytes out(c.td_nonce.begin(), c.td_nonce.end());
  out.insert(out.end(), c.tpm_nonce.begin(), c.tpm_nonce.end());
  return out;
}

absl::StatusOr<EvidenceBundle> RunSession(World& world, const Session& s,
                                          const verifier::Challenge& challenge) {
  auto td_it = world.tds.find(s.td_host);
  if (td_it == world.tds.end()) {
    return WorldError(absl::StrCat("no TD on '", s.td_host, "'"));
  }
  const td::TdState& td = td_it->second;
  const int64_t t0 = challenge.issued_at_ms;

  Message ch = Deliver(world, VerifierLink(s.td_host),
                       {"challenge", ChallengePayload(challenge), t0, 0});
  Message req = Deliver(world, TpmLink(s.td_host, s.tpm_host),
                        {"quote_request",
                         Bytes(challenge.tpm_nonce.begin(), challenge.tpm_nonce.end()),
                         ch.delivered_at_ms, 0});
  DCEA_ASSIGN_OR_RETURN(tpm::TpmQuote produced, s.quote(challenge.tpm_nonce));
  const int64_t latency = verifier::HonestQuoteLatencyMs(s.tpm->kind);
  Message resp = Deliver(
      world, TpmReturnLink(s.td_host, s.tpm_host),
      {"quote", ToPayload(json_util::Dump(evidence::QuoteToJson(produced))),
       req.delivered_at_ms + latency, 0});
  absl::StatusOr<Json> quote_json = json_util::ParseText(FromPayload(resp.payload));
  if (!quote_json.ok()) return WorldError("quote message no longer parses");
  absl::StatusOr<tpm::TpmQuote> quote = evidence::QuoteFromJson(*quote_json, "");
  if (!quote.ok()) return WorldError("quote message no longer decodes");

  std::vector<EventLogEntry> log = evidence::BundleLogFromTpm(s.tpm->log);
  td::InTdFlag flag = world.config.in_td_check ? evidence::EvaluateInTd(td, *quote, log)
                                               : td::InTdFlag::kNotEvaluated;
  std::optional<Digest> binding;
  if (world.config.binding_channel == verifier::BindingChannel::kReportData) {
    binding = td.mrconfigid;
  }
  td::ReportData rd = td::BuildReportData(challenge.td_nonce, binding, flag);
  DCEA_ASSIGN_OR_RETURN(td::TdReport report,
                        td::GenerateTdReport(td, rd, *s.qe, *s.qe_chain));
  Message td_msg = Deliver(
      world, ReturnLink(s.td_host),
      {"td_report", ToPayload(json_util::Dump(evidence::TdReportToJson(report))),
       ch.delivered_at_ms + world.config.td_report_latency_ms, 0});

  evidence::BundleParts parts;
  parts.td_report = std::move(report);
  parts.tpm_quote = std::move(*quote);
  parts.ek_cert_chain = s.ek_chain;
  parts.ak_cert = s.ak_cert;
  parts.event_log = std::move(log);
  parts.nonces = evidence::Nonces{challenge.td_nonce, challenge.tpm_nonce};
  parts.scenario_meta = s.meta;
  parts.scenario_meta["deployment"] = S(DeploymentName(world.config.deployment));
  parts.scenario_meta["seed"] = absl::StrCat(world.rng_seed);
  DCEA_ASSIGN_OR_RETURN(EvidenceBundle assembled, evidence::BuildBundle(std::move(parts)));

  Message ev = Deliver(world, ReturnLink(s.td_host),
                       {"evidence", ToPayload(evidence::SerializeBundle(assembled)),
                        resp.delivered_at_ms, 0});
  absl::StatusOr<EvidenceBundle> bundle =
      evidence::DeserializeBundle(FromPayload(ev.payload));
  if (!bundle.ok()) return WorldError("evidence message no longer decodes");
  bundle->timing = {t0, td_msg.delivered_at_ms, ev.delivered_at_ms};
  world.clock_ms = std::max(world.clock_ms, ev.delivered_at_ms);
  return *std::move(bundle);
}

// ---------------------------------------------------------------------------
// Attack generators.

std::string Variant(const AttackScenario& sc, std::string_view fallback) {
  auto it = sc.params.find("variant");
  return it == sc.params.end() ? S(fallback) : it->second;
}

std::map<std::string, std::string> AttackMeta(const AttackScenario& sc,
                                              const std::string& variant) {
  return {{"scenario", S(ScenarioIdName(sc.id))}, {"variant", variant}};
}

// A software TPM that copies the host-scope measurements of `real`.
absl::StatusOr<tpm::TpmState> SimulatedTpm(const World& world,
                                           const tpm::TpmState& real,
                                           const KeyPair& ca, const Claims& claims,
                                           std::string_view tag) {
  DCEA_ASSIGN_OR_RETURN(tpm::TpmState sim,
                        tpm::TpmInit(ToBytes(SeedTag(world, tag)), ca, claims, real.kind));
  for (const EventLogEntry& e : real.log) {
    if (e.scope == Scope::kHost) {
      DCEA_ASSIGN_OR_RETURN(sim, tpm::ExtendMeasurement(std::move(sim), e));
    }
  }
  return sim;
}

absl::StatusOr<EvidenceBundle> A1(World& world, const AttackScenario& sc,
                                  const verifier::Challenge& challenge) {
  const std::string host = kTenantHost;
  const std::string variant = Variant(sc, "fresh_key");
  const Authorities& auth = world.authorities;

  if (variant == "fresh_key") {
    DCEA_ASSIGN_OR_RETURN(tpm::TpmState * real, QuotingTpm(world, host));
    DCEA_ASSIGN_OR_RETURN(tpm::AkHandle golden, QuotingAk(world, host));
    DCEA_ASSIGN_OR_RETURN(KeyPair attacker_ca,
                          KeyGen(SeedTag(world, "attacker-ca"), KeyKind::kCa));
    DCEA_ASSIGN_OR_RETURN(tpm::TpmState sim,
                          SimulatedTpm(world, *real, attacker_ca, {}, "sim-ek"));
    DCEA_ASSIGN_OR_RETURN(
        tpm::AkResult fresh,
        tpm::CreateSealedAk(std::move(sim), ToBytes(SeedTag(world, "attacker-ak")),
                            world.config.ak_policy_pcrs, nullptr));
    // Claims copied from the genuine AK certificate, signed by the attacker.
    const std::optional<Certificate>& genuine = real->aks.at(golden).ak_cert;
    DCEA_ASSIGN_OR_RETURN(
        Certificate forged,
        IssueCert(attacker_ca, AkPublic(fresh.tpm, fresh.handle),
                  genuine.has_value() ? genuine->claims : Claims{}));
    sim = std::move(fresh.tpm);
    DCEA_RETURN_IF_ERROR(LaunchTd(world, host, AkPublic(sim, fresh.handle),
                                  world.config.workload, &sim));
    DCEA_ASSIGN_OR_RETURN(Session s, DefaultSession(world, host, host));
    s.tpm = &sim;
    tpm::TpmState* sim_ptr = &sim;
    const tpm::AkHandle handle = fresh.handle;
    s.quote = [sim_ptr, handle](const tpm::Nonce& nonce) {
      return tpm::Quote(*sim_ptr, handle, QuoteSelection(), nonce);
    };
    s.ak_cert = forged;
    s.meta = AttackMeta(sc, variant);
    return RunSession(world, s, challenge);
  }

  if (variant == "forge_td") {
    DCEA_ASSIGN_OR_RETURN(KeyPair fake_vendor,
                          KeyGen(SeedTag(world, "fake-vendor"), KeyKind::kCa));
    DCEA_ASSIGN_OR_RETURN(Certificate fake_root,
                          SelfSignedRoot(fake_vendor, auth.vendor_root.claims));
    DCEA_ASSIGN_OR_RETURN(KeyPair fake_qe, KeyGen(SeedTag(world, "fake-qe"), KeyKind::kQe));
    DCEA_ASSIGN_OR_RETURN(
        Certificate fake_qe_cert,
        IssueCert(fake_vendor, fake_qe.public_key, auth.qe_chain.front().claims));
    const CertChain fake_chain = {fake_qe_cert, fake_root};
    DCEA_ASSIGN_OR_RETURN(Session s, DefaultSession(world, host, host));
    s.qe = &fake_qe;
    s.qe_chain = &fake_chain;
    s.meta = AttackMeta(sc, variant);
    return RunSession(world, s, challenge);
  }

  if (variant == "falsified_pcrs") {
    DCEA_ASSIGN_OR_RETURN(tpm::AkHandle golden_handle, QuotingAk(world, host));
    DCEA_ASSIGN_OR_RETURN(tpm::TpmState * before, QuotingTpm(world, host));
    const Bytes golden_ak = AkPublic(*before, golden_handle);
    StackSpec mutated = world.config.stack;
    mutated.hypervisor += "+implant";
    DCEA_RETURN_IF_ERROR(RelaunchHost(world, host, mutated));
    DCEA_ASSIGN_OR_RETURN(tpm::TpmState * real, QuotingTpm(world, host));
    DCEA_RETURN_IF_ERROR(LaunchTd(world, host, golden_ak, world.config.workload, real));
    DCEA_ASSIGN_OR_RETURN(Session s, DefaultSession(world, host, host));
    DCEA_ASSIGN_OR_RETURN(KeyPair attacker,
                          KeyGen(SeedTag(world, "attacker-signer"), KeyKind::kAk));
    const std::map<int, Digest> golden =
        platform::ExpectedLaunchPcrs(world.config.stack.ToHostStack());
    DCEA_ASSIGN_OR_RETURN(tpm::AkHandle handle, QuotingAk(world, host));
    absl::StatusOr<tpm::TpmQuote> sealed =
        tpm::Quote(*real, handle, QuoteSelection(), challenge.tpm_nonce);
    s.meta = AttackMeta(sc, variant);
    s.meta["sealed_ak_quote"] =
        sealed.ok() ? "ok" : S(ErrorCodeName(GetErrorCode(sealed.status())
                                                 .value_or(ErrorCode::kWorldError)));
    s.quote = [real, golden, golden_ak, attacker](
                  const tpm::Nonce& nonce) -> absl::StatusOr<tpm::TpmQuote> {
      tpm::TpmQuote q;
      q.selection = QuoteSelection();
      for (int index : q.selection) {
        auto pin = golden.find(index);
        q.pcr_values.push_back(pin != golden.end() ? pin->second : real->pcrs[index]);
      }
      q.nonce = nonce;
      q.ak_public = golden_ak;
      DCEA_ASSIGN_OR_RETURN(q.signature, Sign(attacker.private_key, q.SignedPayload()));
      return q;
    };
    return RunSession(world, s, challenge);
  }
  return UnknownScenario(absl::StrCat("unknown A1 variant '", variant, "'"));
}

absl::StatusOr<EvidenceBundle> A2MixMatch(World& world, const AttackScenario& sc,
                                          const verifier::Challenge& challenge) {
  const std::string x = kAttackerHost;
  const std::string y = kDecoyHost;
  DCEA_RETURN_IF_ERROR(ProvisionHost(world, x, world.config.stack));
  DCEA_RETURN_IF_ERROR(ProvisionHost(world, y, world.config.stack));
  DCEA_ASSIGN_OR_RETURN(tpm::TpmState * tpm_x, QuotingTpm(world, x));
  DCEA_ASSIGN_OR_RETURN(tpm::AkHandle ak_x, QuotingAk(world, x));
  DCEA_RETURN_IF_ERROR(
      LaunchTd(world, x, AkPublic(*tpm_x, ak_x), world.config.workload, tpm_x));
  DCEA_ASSIGN_OR_RETURN(tpm::TpmState * tpm_y, QuotingTpm(world, y));
  DCEA_ASSIGN_OR_RETURN(tpm::AkHandle ak_y, QuotingAk(world, y));
  DCEA_RETURN_IF_ERROR(
      LaunchTd(world, y, AkPublic(*tpm_y, ak_y), world.config.decoy_workload, tpm_y));
  EnsureRelayLinks(world, x, y);
  DCEA_ASSIGN_OR_RETURN(Session s, DefaultSession(world, x, y));
  s.meta = AttackMeta(sc, "mixmatch");
  return RunSession(world, s, challenge);
}

absl::StatusOr<EvidenceBundle> A2Frankenstein(World& world, const AttackScenario& sc,
                                              const verifier::Challenge& challenge) {
  const std::string x = kAttackerHost;
  const std::string y = kDecoyHost;  // idle honest cloud host
  DCEA_RETURN_IF_ERROR(ProvisionHost(world, x, world.config.stack));
  DCEA_RETURN_IF_ERROR(ProvisionHost(world, y, world.config.stack));
  DCEA_ASSIGN_OR_RETURN(tpm::TpmState * tpm_y, QuotingTpm(world, y));
  DCEA_ASSIGN_OR_RETURN(tpm::AkHandle ak_y, QuotingAk(world, y));
  DCEA_RETURN_IF_ERROR(
      LaunchTd(world, x, AkPublic(*tpm_y, ak_y), world.config.workload, tpm_y));
  EnsureRelayLinks(world, x, y);
  DCEA_ASSIGN_OR_RETURN(Session s, DefaultSession(world, x, y));
  s.meta = AttackMeta(sc, "frankenstein");
  return RunSession(world, s, challenge);
}

absl::StatusOr<EvidenceBundle> A3(World& world, const AttackScenario& sc,
                                  const verifier::Challenge& challenge) {
  const std::string host = kTenantHost;
  const std::string variant = Variant(sc, "drop_rtmr");
  if (variant != "drop_rtmr" && variant != "drop_pcr") {
    return UnknownScenario(absl::StrCat("unknown A3 variant '", variant, "'"));
  }
  auto td = world.tds.find(host);
  if (td == world.tds.end()) return WorldError("tenant TD missing");
  DCEA_ASSIGN_OR_RETURN(tpm::TpmState * tpm, QuotingTpm(world, host));
  const WorkloadEvent injected{2, 8, SeedTag(world, "a3-event"), "unaccounted event"};
  // drop_rtmr: the event never reaches the TPM; drop_pcr: never reaches the TD.
  if (variant == "drop_rtmr") {
    DCEA_RETURN_IF_ERROR(AgentExtend(&td->second, nullptr, injected));
  } else {
    DCEA_RETURN_IF_ERROR(AgentExtend(nullptr, tpm, injected));
  }
  DCEA_ASSIGN_OR_RETURN(Session s, DefaultSession(world, host, host));
  s.meta = AttackMeta(sc, variant);
  return RunSession(world, s, challenge);
}

absl::StatusOr<EvidenceBundle> A4(World& world, const AttackScenario& sc,
                                  const verifier::Challenge& challenge) {
  const std::string host = kTenantHost;
  const std::string variant = Variant(sc, "tamper");
  if (variant == "tamper") {
    world.links[TpmReturnLink(host, host)].tamper_hook = [](Message m) {
      absl::StatusOr<Json> j = json_util::ParseText(FromPayload(m.payload));
      if (!j.ok()) return m;
      absl::StatusOr<Bytes> nonce = HexDecode((*j)["nonce"].get<std::string>());
      if (!nonce.ok() || nonce->empty()) return m;
      (*nonce)[0] ^= 0x01;
      (*j)["nonce"] = HexEncode(*nonce);
      m.payload = ToPayload(json_util::Dump(*j));
      return m;
    };
    DCEA_ASSIGN_OR_RETURN(Session s, DefaultSession(world, host, host));
    s.meta = AttackMeta(sc, variant);
    absl::StatusOr<EvidenceBundle> out = RunSession(world, s, challenge);
    world.links[TpmReturnLink(host, host)].tamper_hook = nullptr;
    return out;
  }
  if (variant == "replay") {
    auto find_stale = [&]() -> const Message* {
      const auto& buffer = world.links[ReturnLink(host)].replay_buffer;
      for (auto it = buffer.rbegin(); it != buffer.rend(); ++it) {
        if (it->kind == "evidence") return &*it;
      }
      return nullptr;
    };
    if (find_stale() == nullptr) {
      // Observe one earlier honest exchange first.
      Prng prng(world.rng_seed ^ 0xa4a4a4a4ULL);
      verifier::Challenge earlier;
      earlier.td_nonce = prng.NextArray<32>();
      earlier.tpm_nonce = prng.NextArray<32>();
      earlier.issued_at_ms = world.clock_ms;
      DCEA_ASSIGN_OR_RETURN(Session s, DefaultSession(world, host, host));
      s.meta = {{"scenario", "honest"}};
      DCEA_RETURN_IF_ERROR(RunSession(world, s, earlier).status());
    }
    const Message stale = *find_stale();
    const int64_t t0 = challenge.issued_at_ms;
    DCEA_ASSIGN_OR_RETURN(tpm::TpmState * tpm, QuotingTpm(world, host));
    const int64_t latency = verifier::HonestQuoteLatencyMs(tpm->kind);
    Message ch = Deliver(world, VerifierLink(host),
                         {"challenge", ChallengePayload(challenge), t0, 0});
    Message td_msg = Deliver(world, ReturnLink(host),
                             {"td_report", {}, ch.delivered_at_ms +
                                                   world.config.td_report_latency_ms, 0});
    Message ev = Deliver(world, ReturnLink(host),
                         {"evidence", stale.payload, ch.delivered_at_ms + latency, 0});
    absl::StatusOr<EvidenceBundle> bundle =
        evidence::DeserializeBundle(FromPayload(ev.payload));
    if (!bundle.ok()) return WorldError("recorded evidence no longer decodes");
    bundle->scenario_meta["scenario"] = S(ScenarioIdName(sc.id));
    bundle->scenario_meta["variant"] = variant;
    bundle->timing = {t0, td_msg.delivered_at_ms, ev.delivered_at_ms};
    world.clock_ms = std::max(world.clock_ms, ev.delivered_at_ms);
    return *std::move(bundle);
  }
  return UnknownScenario(absl::StrCat("unknown A4 variant '", variant, "'"));
}

absl::StatusOr<EvidenceBundle> A5(World& world, const AttackScenario& sc,
                                  const verifier::Challenge& challenge) {
  const std::string host = kTenantHost;
  const std::string variant = Variant(sc, "replace_ak");
  const Authorities& auth = world.authorities;

  if (variant == "replace_ak") {
    DCEA_ASSIGN_OR_RETURN(tpm::TpmState * tpm, QuotingTpm(world, host));
    DCEA_ASSIGN_OR_RETURN(
        tpm::AkResult second,
        tpm::CreateSealedAk(std::move(*tpm), ToBytes(SeedTag(world, "second-ak", host)),
                            world.config.ak_policy_pcrs, &auth.provider_ca));
    *tpm = std::move(second.tpm);
    DCEA_RETURN_IF_ERROR(RegisterAk(world, *tpm, second.handle, host));
    DCEA_ASSIGN_OR_RETURN(Session s, DefaultSession(world, host, host));
    s = WithAk(std::move(s), second.handle);
    s.meta = AttackMeta(sc, variant);
    return RunSession(world, s, challenge);
  }

  if (variant == "spoof_ek") {
    DCEA_ASSIGN_OR_RETURN(tpm::TpmState * real, QuotingTpm(world, host));
    DCEA_ASSIGN_OR_RETURN(KeyPair lookalike,
                          KeyGen(SeedTag(world, "lookalike-ca"), KeyKind::kCa));
    DCEA_ASSIGN_OR_RETURN(Certificate lookalike_root,
                          SelfSignedRoot(lookalike, auth.provider_root.claims));
    DCEA_ASSIGN_OR_RETURN(
        tpm::TpmState sim,
        SimulatedTpm(world, *real, lookalike, HostClaims(world, host), "spoof-ek"));
    DCEA_ASSIGN_OR_RETURN(
        tpm::AkResult ak,
        tpm::CreateSealedAk(std::move(sim), ToBytes(SeedTag(world, "spoof-ak")),
                            world.config.ak_policy_pcrs, &lookalike));
    sim = std::move(ak.tpm);
    DCEA_RETURN_IF_ERROR(
        LaunchTd(world, host, AkPublic(sim, ak.handle), world.config.workload, &sim));
    DCEA_ASSIGN_OR_RETURN(Session s, DefaultSession(world, host, host));
    s.tpm = &sim;
    s = WithAk(std::move(s), ak.handle);
    s.ek_chain = {sim.ek_cert, lookalike_root};
    s.meta = AttackMeta(sc, variant);
    return RunSession(world, s, challenge);
  }

  if (variant == "clone_ak") {
    const std::string z = kCloneHost;
    DCEA_ASSIGN_OR_RETURN(tpm::TpmState * victim, QuotingTpm(world, host));
    DCEA_ASSIGN_OR_RETURN(tpm::AkHandle victim_ak, QuotingAk(world, host));
    DCEA_ASSIGN_OR_RETURN(tpm::SealedAk blob, tpm::ExportSealedAk(*victim, victim_ak));
    DCEA_RETURN_IF_ERROR(ProvisionHost(world, z, world.config.stack));
    DCEA_ASSIGN_OR_RETURN(tpm::TpmState * tpm_z, QuotingTpm(world, z));
    DCEA_ASSIGN_OR_RETURN(tpm::AkResult cloned,
                          tpm::LoadSealedAk(std::move(*tpm_z), std::move(blob)));
    DCEA_ASSIGN_OR_RETURN(
        *tpm_z, tpm::CertifyAk(std::move(cloned.tpm), cloned.handle, auth.provider_ca));
    verifier::RegisterResult reg;
    DCEA_RETURN_IF_ERROR(RegisterAk(world, *tpm_z, cloned.handle, z, &reg));
    DCEA_RETURN_IF_ERROR(LaunchTd(world, z, AkPublic(*tpm_z, cloned.handle),
                                  world.config.workload, tpm_z));
    DCEA_ASSIGN_OR_RETURN(Session s, DefaultSession(world, z, z));
    s = WithAk(std::move(s), cloned.handle);
    s.meta = AttackMeta(sc, variant);
    s.meta["registry"] = reg.duplicate() ? "Duplicate" : "Registered";
    return RunSession(world, s, challenge);
  }
  return UnknownScenario(absl::StrCat("unknown A5 variant '", variant, "'"));
}

absl::StatusOr<EvidenceBundle> A6(World& world, const AttackScenario& sc,
                                  const verifier::Challenge& challenge) {
  const std::string host = kTenantHost;
  StackSpec mutated = world.config.stack;
  mutated.vtpm_binary += "+malicious";
  DCEA_RETURN_IF_ERROR(RelaunchHost(world, host, mutated));
  DCEA_ASSIGN_OR_RETURN(tpm::TpmState * tpm, QuotingTpm(world, host));
  DCEA_ASSIGN_OR_RETURN(tpm::AkHandle golden, QuotingAk(world, host));
  absl::StatusOr<tpm::TpmQuote> sealed =
      tpm::Quote(*tpm, golden, QuoteSelection(), challenge.tpm_nonce);
  // Fallback: a new AK sealed to the modified state.
  DCEA_ASSIGN_OR_RETURN(
      tpm::AkResult fallback,
      tpm::CreateSealedAk(std::move(*tpm), ToBytes(SeedTag(world, "fallback-ak", host)),
                          world.config.ak_policy_pcrs, &world.authorities.provider_ca));
  *tpm = std::move(fallback.tpm);
  DCEA_RETURN_IF_ERROR(RegisterAk(world, *tpm, fallback.handle, host));
  DCEA_RETURN_IF_ERROR(LaunchTd(world, host, AkPublic(*tpm, fallback.handle),
                                world.config.workload, tpm));
  DCEA_ASSIGN_OR_RETURN(Session s, DefaultSession(world, host, host));
  s = WithAk(std::move(s), fallback.handle);
  s.meta = AttackMeta(sc, "vtpm_binary");
  s.meta["sealed_ak_quote"] =
      sealed.ok() ? "ok"
                  : S(ErrorCodeName(
                        GetErrorCode(sealed.status()).value_or(ErrorCode::kWorldError)));
  return RunSession(world, s, challenge);
}

// ---------------------------------------------------------------------------
// Scenario config files.

absl::Status ParseStack(const Json& j, std::string_view path, StackSpec* out) {
  if (!j.is_object()) return json_util::FieldError(path, "expected an object");
  const std::pair<const char*, std::string*> fields[] = {
      {"firmware", &out->firmware},     {"acm", &out->acm},
      {"seamldr", &out->seamldr},       {"kernel", &out->kernel},
      {"hypervisor", &out->hypervisor}, {"vtpm_binary", &out->vtpm_binary},
  };
  for (const auto& [key, value] : j.items()) {
    auto it = std::find_if(std::begin(fields), std::end(fields),
                           [&](const auto& f) { return key == f.first; });
    if (it == std::end(fields)) {
      return json_util::FieldError(json_util::Join(path, key), "unknown field");
    }
    DCEA_ASSIGN_OR_RETURN(*it->second, json_util::GetString(j, key, path));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<WorkloadEvent>> ParseWorkload(const Json& j,
                                                         std::string_view path) {
  if (!j.is_array()) return json_util::FieldError(path, "expected an array");
  std::vector<WorkloadEvent> out;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string item = json_util::Join(path, i);
    WorkloadEvent ev;
    DCEA_ASSIGN_OR_RETURN(int64_t rtmr, json_util::GetInt(j[i], "rtmr_index", item));
    DCEA_ASSIGN_OR_RETURN(int64_t pcr, json_util::GetInt(j[i], "pcr_index", item));
    DCEA_ASSIGN_OR_RETURN(ev.data, json_util::GetString(j[i], "data", item));
    DCEA_ASSIGN_OR_RETURN(ev.description, json_util::GetString(j[i], "description", item));
    if (rtmr < 0 || rtmr > 2) {
      return json_util::FieldError(json_util::Join(item, "rtmr_index"),
                                   "must be 0, 1 or 2");
    }
    ev.rtmr_index = static_cast<int>(rtmr);
    ev.pcr_index = static_cast<int>(pcr);
    auto row = MirroredPcrs(RtmrRegister(ev.rtmr_index));
    if (std::find(row.begin(), row.end(), ev.pcr_index) == row.end()) {
      return json_util::FieldError(json_util::Join(item, "pcr_index"),
                                   "PCR is not mapped to this RTMR");
    }
    out.push_back(std::move(ev));
  }
  return out;
}

Json WorkloadToJson(const std::vector<WorkloadEvent>& events) {
  Json out = Json::array();
  for (const WorkloadEvent& e : events) {
    out.push_back(Json{{"data", e.data},
                       {"description", e.description},
                       {"pcr_index", e.pcr_index},
                       {"rtmr_index", e.rtmr_index}});
  }
  return out;
}

}  // namespace

std::string_view DeploymentName(Deployment d) {
  return d == Deployment::kS1 ? "S1" : "S2";
}

absl::StatusOr<Deployment> ParseDeployment(std::string_view name) {
  if (name == "S1" || name == "s1") return Deployment::kS1;
  if (name == "S2" || name == "s2") return Deployment::kS2;
  return MakeError(ErrorCode::kParseError,
                   absl::StrCat("unknown deployment '", S(name), "'"));
}

const std::vector<int>& QuoteSelection() {
  static const auto* kSelection =
      new std::vector<int>{0, 1, 2, 3, 4, 5, 7, 8, 9, 10, 11, 12, 13, 14, 15, 17, 18};
  return *kSelection;
}

platform::HostStack StackSpec::ToHostStack() const {
  platform::HostStack stack;
  stack.firmware_image = ToBytes(firmware);
  stack.acm_image = ToBytes(acm);
  stack.seamldr_image = ToBytes(seamldr);
  stack.kernel_image = ToBytes(kernel);
  stack.hypervisor_image = ToBytes(hypervisor);
  stack.vtpm_binary = ToBytes(vtpm_binary);
  return stack;
}

StackSpec RandomStack(Prng& prng) {
  StackSpec s;
  s.firmware = RandomTag(prng, "firmware");
  s.acm = RandomTag(prng, "acm");
  s.seamldr = RandomTag(prng, "seamldr");
  s.kernel = RandomTag(prng, "kernel");
  s.hypervisor = RandomTag(prng, "hypervisor");
  s.vtpm_binary = RandomTag(prng, "vtpm");
  return s;
}

std::vector<WorkloadEvent> RandomWorkload(Prng& prng, std::string_view prefix) {
  static constexpr std::string_view kNames[] = {"td-config", "boot-chain",
                                                "application"};
  auto make = [&](int rtmr) {
    auto row = MirroredPcrs(RtmrRegister(rtmr));
    WorkloadEvent ev;
    ev.rtmr_index = rtmr;
    ev.pcr_index = row[prng.Uniform(0, static_cast<int64_t>(row.size()) - 1)];
    ev.data = RandomTag(prng, prefix);
    ev.description = S(kNames[rtmr]);
    return ev;
  };
  std::vector<WorkloadEvent> events;
  for (int rtmr = 0; rtmr < 3; ++rtmr) events.push_back(make(rtmr));
  const int64_t extra = prng.Uniform(0, 5);
  for (int64_t i = 0; i < extra; ++i) {
    events.push_back(make(static_cast<int>(prng.Uniform(0, 2))));
  }
  return events;
}

WorldConfig RandomWorldConfig(uint64_t seed, Deployment deployment) {
  Prng prng(seed);
  WorldConfig c;
  c.seed = seed;
  c.deployment = deployment;
  c.verifier_delay_ms = prng.Uniform(5, 60);
  c.relay_delay_ms = prng.Uniform(25, 200);
  c.stack = RandomStack(prng);
  c.td_firmware = RandomTag(prng, "td-firmware");
  c.workload = RandomWorkload(prng, "tenant");
  c.decoy_workload = RandomWorkload(prng, "decoy");
  return c;
}

LinkId VerifierLink(std::string_view host) { return {kVerifierEndpoint, S(host)}; }
LinkId ReturnLink(std::string_view host) { return {S(host), kVerifierEndpoint}; }
LinkId TpmLink(std::string_view td_host, std::string_view tpm_host) {
  return {absl::StrCat("td@", S(td_host)), absl::StrCat("tpm@", S(tpm_host))};
}
LinkId TpmReturnLink(std::string_view td_host, std::string_view tpm_host) {
  return {absl::StrCat("tpm@", S(tpm_host)), absl::StrCat("td@", S(td_host))};
}

absl::Status AdvanceClock(World& world, int64_t ms) {
  if (ms < 0) return absl::InvalidArgumentError("clock cannot move backwards");
  world.clock_ms += ms;
  return absl::OkStatus();
}

Message Deliver(World& world, const LinkId& link, Message message) {
  auto [it, inserted] = world.links.try_emplace(link);
  if (inserted) it->second.one_way_delay_ms = world.config.local_delay_ms;
  LinkModel& model = it->second;
  message.delivered_at_ms = message.sent_at_ms + model.one_way_delay_ms;
  if (model.tamper_hook) message = model.tamper_hook(std::move(message));
  model.replay_buffer.push_back(message);
  return message;
}

absl::StatusOr<tpm::TpmState*> QuotingTpm(World& world, const std::string& host) {
  if (world.config.deployment == Deployment::kS2) {
    auto it = world.platforms.find(host);
    if (it == world.platforms.end()) {
      return WorldError(absl::StrCat("no platform '", host, "'"));
    }
    return &it->second.tpm;
  }
  auto it = world.vtpms.find(host);
  if (it == world.vtpms.end()) return WorldError(absl::StrCat("no vTPM on '", host, "'"));
  return &it->second.tpm;
}

absl::StatusOr<tpm::AkHandle> QuotingAk(const World& world, const std::string& host) {
  if (world.config.deployment == Deployment::kS2) {
    auto it = world.platform_aks.find(host);
    if (it == world.platform_aks.end()) {
      return WorldError(absl::StrCat("no AK on '", host, "'"));
    }
    return it->second;
  }
  auto it = world.vtpms.find(host);
  if (it == world.vtpms.end()) return WorldError(absl::StrCat("no vTPM on '", host, "'"));
  return it->second.ak;
}

absl::Status ProvisionHost(World& world, const std::string& host,
                           const StackSpec& stack) {
  DCEA_ASSIGN_OR_RETURN(tpm::TpmState fresh, FreshHostTpm(world, host));
  DCEA_ASSIGN_OR_RETURN(platform::Platform launched,
                        platform::MeasuredLaunch(stack.ToHostStack(), std::move(fresh)));
  const KeyPair& ca = world.authorities.provider_ca;
  if (world.config.deployment == Deployment::kS2) {
    DCEA_ASSIGN_OR_RETURN(
        tpm::AkResult ak,
        tpm::CreateSealedAk(std::move(launched.tpm), ToBytes(SeedTag(world, "ak", host)),
                            world.config.ak_policy_pcrs, &ca));
    launched.tpm = std::move(ak.tpm);
    world.platform_aks[host] = ak.handle;
    DCEA_RETURN_IF_ERROR(RegisterAk(world, launched.tpm, ak.handle, host));
  } else {
    DCEA_ASSIGN_OR_RETURN(
        platform::VtpmInstance vtpm,
        platform::InstantiateVtpm(launched, ca, ToBytes(SeedTag(world, "vtpm", host)),
                                  world.config.ak_policy_pcrs));
    DCEA_RETURN_IF_ERROR(RegisterAk(world, vtpm.tpm, vtpm.ak, host));
    world.vtpms[host] = std::move(vtpm);
  }
  world.platforms[host] = std::move(launched);
  EnsureHostLinks(world, host);
  return absl::OkStatus();
}

absl::StatusOr<World> BuildWorld(WorldConfig config) {
  if (config.verifier_delay_ms < 0 || config.relay_delay_ms < 0 ||
      config.local_delay_ms < 0 || config.td_report_latency_ms < 0) {
    return WorldError("link delays must be >= 0");
  }
  World world;
  world.config = std::move(config);
  world.rng_seed = world.config.seed;
  world.registry = std::make_shared<verifier::AkRegistry>();

  Authorities& auth = world.authorities;
  DCEA_ASSIGN_OR_RETURN(auth.provider_ca,
                        KeyGen(SeedTag(world, "provider-ca"), KeyKind::kCa));
  DCEA_ASSIGN_OR_RETURN(auth.provider_root,
                        SelfSignedRoot(auth.provider_ca, {{"name", world.config.provider},
                                                          {"role", "provider-root"}}));
  DCEA_ASSIGN_OR_RETURN(auth.vendor_ca, KeyGen(SeedTag(world, "vendor-ca"), KeyKind::kCa));
  DCEA_ASSIGN_OR_RETURN(auth.vendor_root,
                        SelfSignedRoot(auth.vendor_ca, {{"name", "tdx-vendor"},
                                                        {"role", "vendor-root"}}));
  DCEA_ASSIGN_OR_RETURN(auth.qe, KeyGen(SeedTag(world, "qe"), KeyKind::kQe));
  DCEA_ASSIGN_OR_RETURN(Certificate qe_cert,
                        IssueCert(auth.vendor_ca, auth.qe.public_key, {{"role", "QE"}}));
  auth.qe_chain = {qe_cert, auth.vendor_root};

  const std::string host = kTenantHost;
  DCEA_RETURN_IF_ERROR(ProvisionHost(world, host, world.config.stack));
  DCEA_ASSIGN_OR_RETURN(tpm::TpmState * quoting, QuotingTpm(world, host));
  DCEA_ASSIGN_OR_RETURN(tpm::AkHandle ak, QuotingAk(world, host));
  DCEA_RETURN_IF_ERROR(
      LaunchTd(world, host, AkPublic(*quoting, ak), world.config.workload, quoting));
  return world;
}

std::unique_ptr<verifier::Verifier> MakeVerifier(World& world) {
  World* w = &world;
  return std::make_unique<verifier::Verifier>(
      world.rng_seed ^ 0x5eed5eed5eed5eedULL, [w] { return w->clock_ms; },
      world.registry);
}

verifier::VerifierPolicy DefaultPolicy(const World& world) {
  verifier::VerifierPolicy p;
  p.trusted_tee_roots = {world.authorities.vendor_root};
  p.trusted_provider_roots = {world.authorities.provider_root};
  p.expected_pcr17_18 = platform::ExpectedLaunchPcrs(world.config.stack.ToHostStack());
  p.rtt_threshold_ms = verifier::DefaultRttThresholdMs(
      world.config.deployment == Deployment::kS1 ? tpm::TpmKind::kVirtual
                                                 : tpm::TpmKind::kDiscrete,
      world.config.verifier_delay_ms);
  p.require_ak_registry_uniqueness = true;
  p.binding_channel = world.config.binding_channel;
  p.allowed_providers = {world.config.provider};
  return p;
}

absl::StatusOr<EvidenceBundle> RunHonest(World& world, Deployment kind,
                                         const verifier::Challenge& challenge) {
  if (kind != world.config.deployment) {
    return WorldError(absl::StrCat("world was built for ",
                                   S(DeploymentName(world.config.deployment))));
  }
  DCEA_ASSIGN_OR_RETURN(Session s, DefaultSession(world, kTenantHost, kTenantHost));
  s.meta = {{"scenario", "honest"}};
  return RunSession(world, s, challenge);
}

std::string_view ScenarioIdName(ScenarioId id) {
  switch (id) {
    case ScenarioId::kA1: return "A1";
    case ScenarioId::kA2: return "A2";
    case ScenarioId::kA2MixMatch: return "A2_MixMatch";
    case ScenarioId::kA2Frankenstein: return "A2_Frankenstein";
    case ScenarioId::kA3: return "A3";
    case ScenarioId::kA4: return "A4";
    case ScenarioId::kA5: return "A5";
    case ScenarioId::kA6: return "A6";
  }
  return "?";
}

absl::StatusOr<ScenarioId> ParseScenarioId(std::string_view name) {
  for (ScenarioId id : {ScenarioId::kA1, ScenarioId::kA2, ScenarioId::kA2MixMatch,
                        ScenarioId::kA2Frankenstein, ScenarioId::kA3, ScenarioId::kA4,
                        ScenarioId::kA5, ScenarioId::kA6}) {
    if (ScenarioIdName(id) == name) return id;
  }
  return UnknownScenario(absl::StrCat("unknown scenario id '", S(name), "'"));
}

absl::StatusOr<EvidenceBundle> RunAttack(World& world, const AttackScenario& scenario,
                                         const verifier::Challenge& challenge) {
  switch (scenario.id) {
    case ScenarioId::kA1: return A1(world, scenario, challenge);
    case ScenarioId::kA2:
    case ScenarioId::kA2Frankenstein: return A2Frankenstein(world, scenario, challenge);
    case ScenarioId::kA2MixMatch: return A2MixMatch(world, scenario, challenge);
    case ScenarioId::kA3: return A3(world, scenario, challenge);
    case ScenarioId::kA4: return A4(world, scenario, challenge);
    case ScenarioId::kA5: return A5(world, scenario, challenge);
    case ScenarioId::kA6: return A6(world, scenario, challenge);
  }
  return UnknownScenario("unknown scenario id");
}

const std::vector<CatalogEntry>& Catalog() {
  static const auto* kCatalog = [] {
    auto* c = new std::vector<CatalogEntry>;
    auto honest = [&](std::string name, Deployment d, std::string desc) {
      CatalogEntry e;
      e.name = std::move(name);
      e.honest = true;
      e.honest_kind = d;
      e.relevant_s1 = d == Deployment::kS1;
      e.relevant_s2 = d == Deployment::kS2;
      e.description = std::move(desc);
      c->push_back(std::move(e));
    };
    auto attack = [&](std::string name, ScenarioId id, std::string variant, Attack a,
                      std::set<CheckId> checks, bool s1, std::string desc) {
      CatalogEntry e;
      e.name = std::move(name);
      e.scenario.id = id;
      if (!variant.empty()) e.scenario.params["variant"] = std::move(variant);
      e.attack = a;
      e.targeted_checks = std::move(checks);
      e.relevant_s1 = s1;
      e.relevant_s2 = true;
      e.description = std::move(desc);
      c->push_back(std::move(e));
    };
    honest("honest-s1", Deployment::kS1, "honest TD with a provider vTPM");
    honest("honest-s2", Deployment::kS2, "honest TD with the discrete host TPM");
    attack("a1-fresh-key", ScenarioId::kA1, "fresh_key", Attack::kA1, {CheckId::kC2},
           true, "simulated TPM quoting with a fresh, uncertified AK");
    attack("a1-forge-td", ScenarioId::kA1, "forge_td", Attack::kA1, {CheckId::kC1}, true,
           "TD report signed by a counterfeit quoting enclave");
    attack("a1-falsified-pcrs", ScenarioId::kA1, "falsified_pcrs", Attack::kA1,
           {CheckId::kC2}, true, "fabricated quote carrying golden launch PCRs");
    attack("a2-mixmatch", ScenarioId::kA2MixMatch, "", Attack::kA2,
           {CheckId::kC3, CheckId::kC5, CheckId::kC7}, false,
           "TD evidence from one machine, quote proxied from a decoy");
    attack("a2-frankenstein", ScenarioId::kA2Frankenstein, "", Attack::kA2,
           {CheckId::kC7}, false, "local TD relaying all TPM traffic to a cloud host");
    attack("a3-drop-rtmr", ScenarioId::kA3, "drop_rtmr", Attack::kA3, {CheckId::kC5},
           true, "guest event recorded in the TD but not the TPM");
    attack("a3-drop-pcr", ScenarioId::kA3, "drop_pcr", Attack::kA3, {CheckId::kC5}, true,
           "guest event recorded in the TPM but not the TD");
    attack("a4-tamper", ScenarioId::kA4, "tamper", Attack::kA4,
           {CheckId::kC2, CheckId::kC4}, false, "quote altered in flight");
    attack("a4-replay", ScenarioId::kA4, "replay", Attack::kA4, {CheckId::kC4}, false,
           "stale evidence re-served to a fresh challenge");
    attack("a5-replace-ak", ScenarioId::kA5, "replace_ak", Attack::kA5, {CheckId::kC3},
           false, "quote signed by a different certified AK");
    attack("a5-spoof-ek", ScenarioId::kA5, "spoof_ek", Attack::kA5, {CheckId::kC2},
           false, "EK and AK certified by a lookalike CA");
    attack("a5-clone-ak", ScenarioId::kA5, "clone_ak", Attack::kA5, {CheckId::kC8},
           false, "AK blob moved to another host and re-certified");
    attack("a6-vtpm-binary", ScenarioId::kA6, "", Attack::kA6, {CheckId::kC6}, false,
           "modified vTPM binary with a fallback AK");
    return c;
  }();
  return *kCatalog;
}

absl::StatusOr<const CatalogEntry*> FindCatalogEntry(std::string_view name) {
  static const std::map<std::string, std::string> kAliases = {
      {"a1", "a1-fresh-key"},    {"a2", "a2-frankenstein"}, {"a3", "a3-drop-rtmr"},
      {"a4", "a4-tamper"},       {"a5", "a5-replace-ak"},   {"a6", "a6-vtpm-binary"},
  };
  std::string key = S(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char ch) { return ch == '_' ? '-' : std::tolower(ch); });
  if (auto it = kAliases.find(key); it != kAliases.end()) key = it->second;
  for (const CatalogEntry& e : Catalog()) {
    if (e.name == key) return &e;
  }
  return UnknownScenario(absl::StrCat("unknown scenario '", S(name), "'"));
}

absl::StatusOr<ScenarioFile> ParseScenarioFile(std::string_view text) {
  DCEA_ASSIGN_OR_RETURN(Json j, json_util::ParseText(text));
  if (!j.is_object()) return json_util::FieldError("", "expected an object");
  ScenarioFile file;
  for (const auto& [key, value] : j.items()) {
    if (key == "format_version") {
      DCEA_ASSIGN_OR_RETURN(int64_t v, json_util::GetInt(j, key, ""));
      if (v != 1) return json_util::FieldError("/format_version", "unsupported version");
    } else if (key == "scenario") {
      DCEA_ASSIGN_OR_RETURN(file.scenario, json_util::GetString(j, key, ""));
    } else if (key == "deployment") {
      DCEA_ASSIGN_OR_RETURN(std::string d, json_util::GetString(j, key, ""));
      absl::StatusOr<Deployment> parsed = ParseDeployment(d);
      if (!parsed.ok()) {
        return json_util::FieldError("/deployment", StatusMessage(parsed.status()));
      }
      file.deployment = *parsed;
    } else if (key == "seed") {
      DCEA_ASSIGN_OR_RETURN(int64_t seed, json_util::GetInt(j, key, ""));
      if (seed < 0) return json_util::FieldError("/seed", "must be >= 0");
      file.seed = static_cast<uint64_t>(seed);
    } else if (key == "world") {
      if (!value.is_object()) return json_util::FieldError("/world", "expected an object");
      file.world_overrides = value;
    } else {
      return json_util::FieldError(json_util::Join("", key), "unknown field");
    }
  }
  if (file.scenario.empty()) return json_util::FieldError("/scenario", "missing field");
  return file;
}

absl::StatusOr<WorldConfig> ResolveWorldConfig(const ScenarioFile& file, uint64_t seed,
                                               Deployment deployment) {
  WorldConfig c = RandomWorldConfig(seed, deployment);
  const Json& w = file.world_overrides;
  const std::string path = "/world";
  for (const auto& [key, value] : w.items()) {
    const std::string field = json_util::Join(path, key);
    if (key == "verifier_delay_ms") {
      DCEA_ASSIGN_OR_RETURN(c.verifier_delay_ms, json_util::GetInt(w, key, path));
    } else if (key == "relay_delay_ms") {
      DCEA_ASSIGN_OR_RETURN(c.relay_delay_ms, json_util::GetInt(w, key, path));
    } else if (key == "local_delay_ms") {
      DCEA_ASSIGN_OR_RETURN(c.local_delay_ms, json_util::GetInt(w, key, path));
    } else if (key == "td_report_latency_ms") {
      DCEA_ASSIGN_OR_RETURN(c.td_report_latency_ms, json_util::GetInt(w, key, path));
    } else if (key == "stack") {
      DCEA_RETURN_IF_ERROR(ParseStack(value, field, &c.stack));
    } else if (key == "td_firmware") {
      DCEA_ASSIGN_OR_RETURN(c.td_firmware, json_util::GetString(w, key, path));
    } else if (key == "workload") {
      DCEA_ASSIGN_OR_RETURN(c.workload, ParseWorkload(value, field));
    } else if (key == "decoy_workload") {
      DCEA_ASSIGN_OR_RETURN(c.decoy_workload, ParseWorkload(value, field));
    } else if (key == "provider") {
      DCEA_ASSIGN_OR_RETURN(c.provider, json_util::GetString(w, key, path));
    } else if (key == "region") {
      DCEA_ASSIGN_OR_RETURN(c.region, json_util::GetString(w, key, path));
    } else if (key == "binding_channel") {
      DCEA_ASSIGN_OR_RETURN(std::string name, json_util::GetString(w, key, path));
      absl::StatusOr<verifier::BindingChannel> ch = verifier::ParseBindingChannel(name);
      if (!ch.ok()) return json_util::FieldError(field, StatusMessage(ch.status()));
      c.binding_channel = *ch;
    } else if (key == "in_td_check") {
      DCEA_ASSIGN_OR_RETURN(c.in_td_check, json_util::GetBool(w, key, path));
    } else if (key == "ak_policy_pcrs") {
      if (!value.is_array() || value.empty()) {
        return json_util::FieldError(field, "expected a non-empty array");
      }
      c.ak_policy_pcrs.clear();
      for (const Json& v : value) {
        if (!v.is_number_integer() || v.get<int>() < 0 || v.get<int>() >= kNumPcrs) {
          return json_util::FieldError(field, "expected PCR indices");
        }
        c.ak_policy_pcrs.insert(v.get<int>());
      }
    } else {
      return json_util::FieldError(field, "unknown field");
    }
  }
  if (c.verifier_delay_ms < 0 || c.relay_delay_ms < 0 || c.local_delay_ms < 0 ||
      c.td_report_latency_ms < 0) {
    return json_util::FieldError(path, "delays must be >= 0");
  }
  return c;
}

Json WorldConfigToJson(const WorldConfig& c) {
  Json pcrs = Json::array();
  for (int p : c.ak_policy_pcrs) pcrs.push_back(p);
  return Json{
      {"ak_policy_pcrs", pcrs},
      {"binding_channel", S(verifier::BindingChannelName(c.binding_channel))},
      {"decoy_workload", WorkloadToJson(c.decoy_workload)},
      {"in_td_check", c.in_td_check},
      {"local_delay_ms", c.local_delay_ms},
      {"provider", c.provider},
      {"region", c.region},
      {"relay_delay_ms", c.relay_delay_ms},
      {"stack", Json{{"acm", c.stack.acm},
                     {"firmware", c.stack.firmware},
                     {"hypervisor", c.stack.hypervisor},
                     {"kernel", c.stack.kernel},
                     {"seamldr", c.stack.seamldr},
                     {"vtpm_binary", c.stack.vtpm_binary}}},
      {"td_firmware", c.td_firmware},
      {"td_report_latency_ms", c.td_report_latency_ms},
      {"verifier_delay_ms", c.verifier_delay_ms},
      {"workload", WorkloadToJson(c.workload)},
  };
}

}  // namespace dcea::adversary
