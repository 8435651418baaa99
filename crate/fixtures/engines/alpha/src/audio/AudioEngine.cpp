#include "AudioEngine.h"
#include "platform/Platform.h"
#include "fmod/fmod.hpp"

// AudioEngine
