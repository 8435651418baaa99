#include "Button.h"
#include "audio/AudioEngine.h"
#include "platform/Platform.h"

// Button
