#include "lifelog/qa.hpp"

#include <array>
#include <cctype>

#include "lifelog/error.hpp"
#include "lifelog/rng.hpp"

namespace lifelog {

namespace {

constexpr std::array<std::string_view, 12> kKindNames = {
    "what", "where", "when", "who", "duration", "count", "average", "argmax", "list", "first", "last", "before_after"};

const std::string& text_attr(const Episode& e, const char* name) {
  const auto it = e.attributes.find(name);
  if (it == e.attributes.end() || !std::holds_alternative<std::string>(it->second)) {
    throw DataError("episode " + e.id + " lacks text attribute '" + name + "'");
  }
  return std::get<std::string>(it->second);
}

std::int64_t int_attr(const Episode& e, const char* name) {
  const auto it = e.attributes.find(name);
  if (it == e.attributes.end() || !std::holds_alternative<std::int64_t>(it->second)) {
    throw DataError("episode " + e.id + " lacks integer attribute '" + name + "'");
  }
  return std::get<std::int64_t>(it->second);
}

std::string place_of(const Episode& e) { return e.location ? e.location->place : std::string(); }
std::string city_of(const Episode& e) { return e.location ? e.location->city : std::string(); }

bool text_has_date(const Episode& e) { return e.text.find(e.start.slashed()) != std::string::npos; }

// Collects the pairs for one episode.
class AtomicBuilder {
 public:
  AtomicBuilder(const Episode& e, Rng& rng) : e_(e), rng_(rng) {
    params_["date"] = e.start.slashed();
    params_["people"] = natural_join(e.participants);
  }

  Params& params() { return params_; }

  // One of several phrasings, chosen by the stream.
  void add(QuestionKind kind, std::initializer_list<std::string_view> questions, AnswerValue answer,
           std::string_view answer_pattern) {
    std::vector<std::string_view> qs(questions);
    QAPair qa;
    qa.kind = kind;
    qa.question = fill(qs[static_cast<std::size_t>(rng_.below(qs.size()))], params_);
    qa.answer_text = render_answer(kind, answer, answer_pattern, params_);
    qa.answer = std::move(answer);
    qa.evidence = {e_.id};
    qa.scope = {e_.category};
    qa.template_id = std::string(category_name(e_.category)) + "." + std::string(kind_name(kind));
    out_.push_back(std::move(qa));
  }

  void who(std::initializer_list<std::string_view> questions, std::string_view answer_pattern) {
    if (e_.participants.empty()) return;
    add(QuestionKind::who, questions, e_.participants, answer_pattern);
  }

  void when(std::initializer_list<std::string_view> questions, std::string_view answer_pattern) {
    if (!text_has_date(e_)) return;
    add(QuestionKind::when, questions, e_.start, answer_pattern);
  }

  std::vector<QAPair> take() { return std::move(out_); }

 private:
  const Episode& e_;
  Rng& rng_;
  Params params_;
  std::vector<QAPair> out_;
};

Number minutes_of(const Episode& e) { return Number::integer(int_attr(e, "minutes"), "minutes"); }

}  // namespace

std::string_view kind_name(QuestionKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<QuestionKind> parse_kind(std::string_view s) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == s) return static_cast<QuestionKind>(i);
  }
  return std::nullopt;
}

bool is_atomic(QuestionKind k) { return static_cast<int>(k) <= static_cast<int>(QuestionKind::duration); }

QuestionKind kind_for(AggregateOp op) {
  switch (op) {
    case AggregateOp::count:
      return QuestionKind::count;
    case AggregateOp::average:
      return QuestionKind::average;
    case AggregateOp::argmax:
      return QuestionKind::argmax;
    case AggregateOp::list:
      return QuestionKind::list;
    case AggregateOp::first:
      return QuestionKind::first;
    case AggregateOp::last:
      return QuestionKind::last;
    case AggregateOp::before_after:
      return QuestionKind::before_after;
  }
  return QuestionKind::count;
}

std::string fill(std::string_view pattern, const Params& params) {
  std::string out;
  out.reserve(pattern.size() + 32);
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] == '{') {
      const auto close = pattern.find('}', i + 1);
      if (close != std::string_view::npos) {
        const std::string name(pattern.substr(i + 1, close - i - 1));
        if (const auto it = params.find(name); it != params.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += pattern[i++];
  }
  return out;
}

std::string natural_join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += i + 1 == items.size() ? " and " : ", ";
    out += items[i];
  }
  return out;
}

std::string render_answer(QuestionKind kind, const AnswerValue& value, std::string_view pattern, const Params& params,
                          std::string_view pattern_no) {
  auto mismatch = [&] {
    return DataError("answer of type " + std::string(answer_type_name(value)) + " does not fit kind " +
                     std::string(kind_name(kind)));
  };
  std::string surface;
  std::string_view fallback;
  switch (kind) {
    case QuestionKind::what:
    case QuestionKind::where:
    case QuestionKind::who:
    case QuestionKind::list:
      if (const auto* s = std::get_if<std::string>(&value)) {
        surface = *s;
      } else if (const auto* l = std::get_if<std::vector<std::string>>(&value)) {
        surface = l->empty() ? "nothing" : natural_join(*l);
      } else {
        throw mismatch();
      }
      fallback = "{answer}.";
      break;
    case QuestionKind::when:
    case QuestionKind::first:
    case QuestionKind::last:
      if (!std::holds_alternative<Date>(value)) throw mismatch();
      surface = std::get<Date>(value).slashed();
      fallback = "On {answer}.";
      break;
    case QuestionKind::duration:
    case QuestionKind::count:
    case QuestionKind::average: {
      const auto* n = std::get_if<Number>(&value);
      if (n == nullptr) throw mismatch();
      surface = n->text();
      fallback = kind == QuestionKind::count ? "{answer} times." : "{answer} {unit}.";
      break;
    }
    case QuestionKind::argmax:
      if (!std::holds_alternative<std::string>(value)) throw mismatch();
      surface = std::get<std::string>(value);
      fallback = "In {answer}.";
      break;
    case QuestionKind::before_after: {
      const auto* b = std::get_if<bool>(&value);
      if (b == nullptr) throw mismatch();
      if (!*b && !pattern_no.empty()) pattern = pattern_no;
      surface = *b ? "Yes" : "No";
      fallback = "{answer}.";
      break;
    }
  }
  Params p = params;
  p["answer"] = surface;
  if (const auto* n = std::get_if<Number>(&value); n != nullptr && !p.contains("unit")) p["unit"] = n->unit;
  std::string out = fill(pattern.empty() ? fallback : pattern, p);
  if (kind == QuestionKind::count && surface == "1") {
    // "1 times" -> "1 time"
    const std::string plural = " 1 times";
    for (auto pos = out.find(plural); pos != std::string::npos; pos = out.find(plural, pos)) {
      const auto after = pos + plural.size();
      if (after < out.size() && std::isalpha(static_cast<unsigned char>(out[after]))) {
        pos = after;
        continue;
      }
      out.erase(after - 1, 1);
    }
  }
  return out;
}

std::vector<QAPair> gen_atomic_qa(const Episode& e, Rng& rng) {
  AtomicBuilder b(e, rng);
  auto& p = b.params();
  switch (e.category) {
    case Category::breakfast:
    case Category::lunch:
    case Category::dinner: {
      const std::string meal_name(category_name(e.category));
      p["meal_name"] = meal_name;
      const std::string& meal = text_attr(e, "meal");
      if (e.participants.empty()) {
        b.add(QuestionKind::what, {"What did I eat for {meal_name} on {date}?", "What did I have for {meal_name} on {date}?"},
              meal, "I ate {answer} for {meal_name}.");
      } else {
        b.add(QuestionKind::what, {"What did I eat with {people} on {date}?"}, meal, "I ate {answer} with {people}.");
      }
      b.who({"Who did I have {meal_name} with on {date}?"}, "I had {meal_name} with {answer}.");
      break;
    }
    case Category::chat:
      p["time_of_day"] = text_attr(e, "time_of_day");
      b.who({"Who did I talk to {time_of_day} on {date}?"}, "I talked to {answer}.");
      b.add(QuestionKind::duration, {"How long did I talk to {people} on {date}?"}, minutes_of(e),
            "I talked to {people} for {answer} minutes.");
      break;
    case Category::watch_tv:
      p["show"] = text_attr(e, "show");
      b.add(QuestionKind::what, {"What did I watch on TV on {date}?", "What did I watch on {date}?"}, p["show"],
            "I watched {answer}.");
      b.add(QuestionKind::duration, {"How long did I watch {show} on {date}?"}, minutes_of(e),
            "I watched {show} for {answer} minutes.");
      break;
    case Category::read:
      p["material"] = text_attr(e, "material");
      b.add(QuestionKind::what, {"What did I read on {date}?"}, p["material"], "I read {answer}.");
      b.add(QuestionKind::duration, {"How long did I spend reading {material} on {date}?"}, minutes_of(e),
            "I spent {answer} minutes reading {material}.");
      break;
    case Category::exercise:
      p["activity"] = text_attr(e, "activity");
      p["minutes"] = std::to_string(int_attr(e, "minutes"));
      b.add(QuestionKind::what, {"What exercise did I do on {date}?", "What kind of workout did I do on {date}?"},
            p["activity"], "I did some {answer}.");
      b.add(QuestionKind::duration, {"How long did I spend {activity} on {date}?"}, minutes_of(e),
            "I spent {answer} minutes {activity}.");
      b.when({"When did I do {minutes} minutes of {activity}?"}, "I did it on {answer}.");
      break;
    case Category::social_media:
      b.add(QuestionKind::duration, {"How long was I on social media on {date}?"}, minutes_of(e),
            "I spent {answer} minutes on social media.");
      break;
    case Category::grocery: {
      p["place"] = place_of(e);
      const auto it = e.attributes.find("items");
      b.add(QuestionKind::what, {"What did I buy at {place} on {date}?"}, std::get<std::vector<std::string>>(it->second),
            "I bought {answer}.");
      b.add(QuestionKind::where, {"Where did I go grocery shopping on {date}?"}, p["place"],
            "I went grocery shopping at {answer}.");
      b.who({"Who was with me at {place} on {date}?"}, "I was there with {answer}.");
      break;
    }
    case Category::dating:
      p["place"] = place_of(e);
      b.who({"Who did I go on a date with on {date}?"}, "I went on a date with {answer}.");
      b.add(QuestionKind::where, {"Where did I go on a date with {people} on {date}?"}, p["place"],
            "We went to {answer}.");
      break;
    case Category::hobbies:
      p["hobby"] = text_attr(e, "hobby");
      b.add(QuestionKind::what, {"Which hobby did I spend time on on {date}?"}, p["hobby"], "I spent time on {answer}.");
      b.add(QuestionKind::duration, {"How long did I spend on {hobby} on {date}?"}, minutes_of(e),
            "I spent {answer} minutes on {hobby}.");
      break;
    case Category::bake:
    case Category::cook:
      p["verb"] = e.category == Category::bake ? "bake" : "cook";
      p["past"] = e.category == Category::bake ? "baked" : "cooked";
      b.add(QuestionKind::what, {"What did I {verb} on {date}?"}, text_attr(e, "dish"), "I {past} {answer}.");
      b.who({"Who did I {verb} with on {date}?"}, "I {past} with {answer}.");
      break;
    case Category::pet_care:
      p["pet"] = text_attr(e, "pet");
      p["care"] = text_attr(e, "care");
      b.add(QuestionKind::what, {"What did {pet} get done on {date}?"}, p["care"], "{pet} had {answer}.");
      b.add(QuestionKind::where, {"Where did {pet} have {care} on {date}?"}, place_of(e), "At {answer}.");
      break;
    case Category::travel:
      p["city"] = city_of(e);
      b.add(QuestionKind::where, {"Where did I travel to on {date}?", "Where did my trip starting {date} go?"},
            p["city"], "I went on a trip to {answer}.");
      b.when({"When did my trip to {city} start?"}, "It started on {answer}.");
      b.who({"Who did I travel to {city} with on {date}?"}, "I traveled with {answer}.");
      break;
    case Category::places_visited:
      p["city"] = city_of(e);
      p["time_of_day"] = text_attr(e, "time_of_day");
      b.add(QuestionKind::where, {"What did I visit in {city} {time_of_day} on {date}?"}, place_of(e),
            "I visited {answer}.");
      b.who({"Who was with me in {city} {time_of_day} on {date}?"}, "I was with {answer}.");
      break;
    case Category::dining:
      p["city"] = city_of(e);
      p["time_of_day"] = text_attr(e, "time_of_day");
      b.add(QuestionKind::what, {"What did I eat in {city} {time_of_day} on {date}?"}, text_attr(e, "meal"),
            "I ate {answer}.");
      b.add(QuestionKind::where, {"Where did I eat in {city} {time_of_day} on {date}?"}, place_of(e),
            "I ate at {answer}.");
      break;
    case Category::personal_medical_care:
      p["care_type"] = text_attr(e, "care_type");
      p["place"] = place_of(e);
      b.add(QuestionKind::what, {"What appointment did I have at the {place} on {date}?"}, p["care_type"],
            "I had my {answer}.");
      b.add(QuestionKind::where, {"Where did I have my {care_type} on {date}?"}, p["place"], "At the {answer}.");
      b.when({"When did I go to the {place} for my {care_type}?"}, "On {answer}.");
      break;
    case Category::child_medical_care:
    case Category::parent_medical_care:
      p["care_type"] = text_attr(e, "care_type");
      p["place"] = place_of(e);
      b.who({"Who did I take for an {care_type} on {date}?"}, "I took {answer}.");
      b.add(QuestionKind::what, {"What appointment did {people} have on {date}?"}, p["care_type"],
            "{people} had an {answer}.");
      b.add(QuestionKind::where, {"Where did {people} have an {care_type} on {date}?"}, p["place"],
            "At the {answer}.");
      b.when({"When did {people} have an {care_type} at the {place}?"}, "On {answer}.");
      break;
    case Category::birth_info:
      b.when({"When was I born?", "What is my birthday?"}, "I was born on {answer}.");
      b.add(QuestionKind::where, {"Where was I born?"}, city_of(e), "I was born in {answer}.");
      break;
    case Category::college_move:
    case Category::grad_school_move:
      p["stage"] = e.category == Category::college_move ? "college" : "graduate school";
      b.add(QuestionKind::where, {"Which city did I move to for {stage}?"}, city_of(e), "I moved to {answer}.");
      b.add(QuestionKind::what, {"Which school did I attend for {stage}?"}, place_of(e), "I attended {answer}.");
      b.when({"When did I move for {stage}?"}, "On {answer}.");
      break;
    case Category::college_graduation:
    case Category::grad_school_graduation:
      p["stage"] = e.category == Category::college_graduation ? "college" : "graduate school";
      b.add(QuestionKind::what, {"What did I study in {stage}?"}, text_attr(e, "degree"), "I studied {answer}.");
      b.add(QuestionKind::where, {"Where did I graduate from {stage}?"}, place_of(e), "I graduated from {answer}.");
      b.when({"When did I graduate from {stage}?"}, "On {answer}.");
      break;
  }
  return b.take();
}

}  // namespace lifelog
