#pragma once

#include <string>

#include "json.hpp"
#include "lifelog/episode.hpp"
#include "lifelog/persona.hpp"
#include "lifelog/qa.hpp"
#include "lifelog/query.hpp"

namespace lifelog {

using Json = nlohmann::ordered_json;

Json attr_to_json(const AttrValue& v);
AttrValue attr_from_json(const Json& j);

Json episode_to_json(const Episode& e);
// Throws DataError describing the first bad field.
Episode episode_from_json(const Json& j);

Json persona_to_json(const Persona& p);
Persona persona_from_json(const Json& j);

Json filter_to_json(const EpisodeFilter& f);
EpisodeFilter filter_from_json(const Json& j);
Json query_to_json(const QuerySpec& q);
QuerySpec query_from_json(const Json& j);

Json answer_to_json(const AnswerValue& v);
AnswerValue answer_from_json(const Json& j);

Json qa_to_json(const QAPair& qa);
QAPair qa_from_json(const Json& j);

}  // namespace lifelog
