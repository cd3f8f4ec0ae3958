__version__ = '0.3'
__app_name__ = 'trotex'
__debian_version__ = 'bookworm'
