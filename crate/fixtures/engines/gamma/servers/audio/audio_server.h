#pragma once
#include "core/object.h"

// audio_server
